#include "hmvp/generator.hpp"

#include <cmath>
#include <string>

#include "hmvp/error.hpp"

namespace hmvp {

namespace {

constexpr int kMaxHalvings = 40;

}  // namespace

BlockCovariance generate(const GeneratorConfig& config,
                         std::shared_ptr<const HierarchyTemplate> tmpl) {
  if (config.level < 1 || config.level > config.max_level)
    throw LevelOutOfRange(config.level, 1, config.max_level);
  if (!(config.coupling_scale >= 0.0 && config.coupling_scale <= 1.0))
    throw GenerationFailed("coupling_scale must lie in [0, 1]");
  if (!tmpl || tmpl->max_level() < config.level)
    tmpl = std::make_shared<const HierarchyTemplate>(config.level);

  const int level = config.level;
  CounterRng rng(config.seed);

  const std::size_t jc = tmpl->junction_count(level);
  std::vector<double> t_diag(jc);
  for (double& t : t_diag)
    t = config.integer_mode ? static_cast<double>(rng.integer(5, 13)) : rng.uniform(0.5, 2.0);

  const auto clusters = tmpl->clusters(level);
  std::vector<Mat3> blocks(clusters.size());
  std::vector<Mat3> couplings(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    Mat3 m;
    for (double& v : m.a)
      v = config.integer_mode ? static_cast<double>(rng.integer(-2, 2)) : rng.uniform(-1.0, 1.0);
    Mat3 b = m * transpose(m);
    const double trace = b(0, 0) + b(1, 1) + b(2, 2);
    double shift = 0.5 * trace / 3.0;
    if (config.integer_mode) shift = std::max(1.0, std::round(shift));
    else shift = std::max(shift, 0.05);
    for (int i = 0; i < 3; ++i) b(i, i) += shift;
    blocks[c] = b;

    const Cluster& cl = clusters[c];
    for (int r = 0; r < 3; ++r) {
      for (int s = 0; s < 3; ++s) {
        const double u = rng.uniform(-1.0, 1.0);  // always drawn to keep the stream aligned
        const auto corner = cl.corners[static_cast<std::size_t>(r)];
        const auto interior = cl.interiors[static_cast<std::size_t>(s)];
        if (config.strict_mask && !tmpl->permitted(level, corner, interior, true)) continue;
        double v = config.coupling_scale * u;
        if (config.integer_mode) {
          v = std::round(5.0 * v);
        } else {
          v *= std::sqrt(t_diag[corner] * b(s, s));
        }
        couplings[c](r, s) = v;
      }
    }
  }

  for (int attempt = 0; attempt <= kMaxHalvings; ++attempt) {
    BlockCovariance cov(tmpl, level, t_diag, blocks, couplings);
    if (is_positive_definite(cov, config.pd_tol)) return cov;
    for (Mat3& j : couplings)
      for (double& v : j.a) v = config.integer_mode ? std::trunc(v / 2.0) : v / 2.0;
  }
  throw GenerationFailed("no positive definite instance after " + std::to_string(kMaxHalvings) +
                         " coupling halvings (seed " + std::to_string(config.seed) + ")");
}

DenseMatrix paper_fixture_matrix() {
  static constexpr int kValues[15][15] = {
      {7, 0, 0, 0, 0, 0, -3, 0, 0, 0, 0, 0, 0, 0, 0},
      {0, 13, 0, 0, 0, 0, 0, 0, 0, -3, 0, 3, 0, 0, 0},
      {0, 0, 8, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -5, 0},
      {0, 0, 0, 7, 0, 0, 4, 0, 0, -3, -2, 0, 0, 0, 0},
      {0, 0, 0, 0, 12, 0, 0, 0, 1, 0, 0, 0, -2, 0, 0},
      {0, 0, 0, 0, 0, 7, 0, 0, 0, 0, 0, -1, 0, 0, 1},
      {-3, 0, 0, 4, 0, 0, 9, -1, 4, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, -1, 11, -6, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 1, 0, 4, -6, 12, 0, 0, 0, 0, 0, 0},
      {0, -3, 0, -3, 0, 0, 0, 0, 0, 13, -1, -3, 0, 0, 0},
      {0, 0, 0, -2, 0, 0, 0, 0, 0, -1, 8, -1, 0, 0, 0},
      {0, 3, 0, 0, 0, -1, 0, 0, 0, -3, -1, 9, 0, 0, 0},
      {0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 0, 0, 9, 1, 3},
      {0, 0, -5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 12, -1},
      {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 3, -1, 8},
  };
  DenseMatrix m(15, 15);
  for (std::size_t i = 0; i < 15; ++i)
    for (std::size_t j = 0; j < 15; ++j) m(i, j) = kValues[i][j];
  return m;
}

BlockCovariance paper_fixture(std::shared_ptr<const HierarchyTemplate> tmpl) {
  if (!tmpl) tmpl = std::make_shared<const HierarchyTemplate>(2);
  ValidationConfig strict;
  strict.strict_mask = true;
  return BlockCovariance::from_dense(paper_fixture_matrix(), std::move(tmpl), 2, strict);
}

}  // namespace hmvp
