#include "hmvp/schur.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include "hmvp/error.hpp"

namespace hmvp {

namespace {

// Runs fn(c) for every cluster. The parallel branch must not throw; kernels
// record failures and report them after the loop.
template <class Fn>
void for_each_cluster(std::size_t count, ExecutionMode mode, Fn&& fn) {
  if (mode == ExecutionMode::Parallel) {
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < n; ++c) fn(static_cast<std::size_t>(c));
  } else {
    for (std::size_t c = 0; c < count; ++c) fn(c);
  }
}

void check_factors(const BlockCovariance& cov, const LevelFactors& factors) {
  if (cov.level() < 1) throw LevelOutOfRange(cov.level(), 1, cov.hierarchy().max_level());
  if (factors.level != cov.level()) throw DimensionMismatch("factor level", static_cast<std::size_t>(cov.level()), static_cast<std::size_t>(factors.level));
  if (factors.inverse_blocks.size() != cov.interior_blocks().size())
    throw DimensionMismatch("factor blocks", cov.interior_blocks().size(), factors.inverse_blocks.size());
}

// Level-(k-1) block layout being assembled from the reduced matrix.
class Reblocker {
 public:
  Reblocker(const HierarchyTemplate& tmpl, int level)
      : tmpl_(tmpl), level_(level) {
    if (level_ == 0) return;
    junctions_ = tmpl.junction_count(level);
    t_diag_.assign(junctions_, 0.0);
    blocks_.assign(tmpl.cluster_count(level), Mat3{});
    couplings_.assign(tmpl.cluster_count(level), Mat3{});
  }

  void set_diagonal(std::size_t i, double v) { diagonal(i) = v; }

  void subtract(std::size_t i, std::size_t j, double v) {
    if (i == j) {
      diagonal(i) -= v;
      return;
    }
    if (i > j) std::swap(i, j);
    if (level_ == 0) {
      base_(static_cast<int>(i), static_cast<int>(j)) -= v;
      base_(static_cast<int>(j), static_cast<int>(i)) -= v;
      return;
    }
    if (j < junctions_) {
      fill_[{i, j}] -= v;
      return;
    }
    const std::size_t cj = (j - junctions_) / 3;
    const int sj = static_cast<int>((j - junctions_) % 3);
    if (i < junctions_) {
      const int r = tmpl_.corner_slot(level_, cj, i);
      if (r < 0) {
        fill_[{i, j}] -= v;
      } else {
        couplings_[cj](r, sj) -= v;
      }
      return;
    }
    const std::size_t ci = (i - junctions_) / 3;
    const int si = static_cast<int>((i - junctions_) % 3);
    if (ci != cj) {
      fill_[{i, j}] -= v;
      return;
    }
    blocks_[ci](si, sj) -= v;
    blocks_[ci](sj, si) -= v;
  }

  BlockCovariance finish(std::shared_ptr<const HierarchyTemplate> tmpl) {
    if (level_ == 0) return BlockCovariance(std::move(tmpl), base_);
    std::vector<FillEntry> fill;
    fill.reserve(fill_.size());
    for (const auto& [key, v] : fill_) fill.push_back({key.first, key.second, v});
    return BlockCovariance(std::move(tmpl), level_, std::move(t_diag_), std::move(blocks_),
                           std::move(couplings_), std::move(fill));
  }

 private:
  double& diagonal(std::size_t i) {
    if (level_ == 0) return base_(static_cast<int>(i), static_cast<int>(i));
    if (i < junctions_) return t_diag_[i];
    const std::size_t c = (i - junctions_) / 3;
    const int s = static_cast<int>((i - junctions_) % 3);
    return blocks_[c](s, s);
  }

  const HierarchyTemplate& tmpl_;
  int level_;
  std::size_t junctions_ = 0;
  Mat3 base_{};
  std::vector<double> t_diag_;
  std::vector<Mat3> blocks_;
  std::vector<Mat3> couplings_;
  std::map<std::pair<std::size_t, std::size_t>, double> fill_;
};

}  // namespace

LevelFactors invert_interior_blocks(const BlockCovariance& cov, double pd_tol, ExecutionMode mode) {
  if (cov.level() < 1) throw LevelOutOfRange(cov.level(), 1, cov.hierarchy().max_level());
  const auto blocks = cov.interior_blocks();
  LevelFactors factors{cov.level(), std::vector<Mat3>(blocks.size())};
  std::vector<unsigned char> ok(blocks.size(), 0);

  for_each_cluster(blocks.size(), mode, [&](std::size_t c) {
    if (auto inv = invert_symmetric3(blocks[c], pd_tol)) {
      factors.inverse_blocks[c] = *inv;
      ok[c] = 1;
    }
  });

  for (std::size_t c = 0; c < ok.size(); ++c)
    if (!ok[c]) throw SingularInteriorBlock(cov.level(), c);
  return factors;
}

BlockCovariance schur_complement(const BlockCovariance& cov, const LevelFactors& factors,
                                 const ValidationConfig& config, ExecutionMode mode) {
  check_factors(cov, factors);
  const HierarchyTemplate& tmpl = cov.hierarchy();
  const int k = cov.level();
  const auto clusters = tmpl.clusters(k);

  std::vector<Mat3> corrections(clusters.size());
  for_each_cluster(clusters.size(), mode, [&](std::size_t c) {
    corrections[c] = congruence(cov.coupling_blocks()[c], factors.inverse_blocks[c]);
  });

  Reblocker out(tmpl, k - 1);
  const auto t_diag = cov.t_diag();
  for (std::size_t j = 0; j < t_diag.size(); ++j) out.set_diagonal(j, t_diag[j]);
  for (const FillEntry& f : cov.fill_t()) out.subtract(f.row, f.col, -f.value);

  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& corners = clusters[c].corners;
    for (int r = 0; r < 3; ++r)
      for (int q = r; q < 3; ++q)
        out.subtract(corners[static_cast<std::size_t>(r)], corners[static_cast<std::size_t>(q)],
                     corrections[c](r, q));
  }

  BlockCovariance reduced = out.finish(cov.hierarchy_ptr());
  for (const FillEntry& f : reduced.fill_t())
    if (std::abs(f.value) > config.zero_tol) throw FillOutsideMask(k - 1, f.row, f.col);
  return reduced;
}

BlockCovariance schur_complement(const BlockCovariance& cov, const ValidationConfig& config,
                                 ExecutionMode mode) {
  return schur_complement(cov, invert_interior_blocks(cov, config.pd_tol, mode), config, mode);
}

std::vector<double> interior_solve(const BlockCovariance& cov, const LevelFactors& factors,
                                   std::span<const double> junction_values,
                                   std::span<const double> rhs, ExecutionMode mode) {
  check_factors(cov, factors);
  const HierarchyTemplate& tmpl = cov.hierarchy();
  const int k = cov.level();
  const std::size_t jc = tmpl.junction_count(k);
  if (junction_values.size() != jc) throw DimensionMismatch("junction vector", jc, junction_values.size());
  if (rhs.size() != tmpl.node_count(k)) throw DimensionMismatch("right-hand side", tmpl.node_count(k), rhs.size());

  const auto clusters = tmpl.clusters(k);
  std::vector<double> out(3 * clusters.size());
  for_each_cluster(clusters.size(), mode, [&](std::size_t c) {
    const Cluster& cl = clusters[c];
    const Vec3 v{junction_values[cl.corners[0]], junction_values[cl.corners[1]],
                 junction_values[cl.corners[2]]};
    const Vec3 coupled = transpose_times(cov.coupling_blocks()[c], v);
    const Vec3 local{rhs[cl.interiors[0]] - coupled[0], rhs[cl.interiors[1]] - coupled[1],
                     rhs[cl.interiors[2]] - coupled[2]};
    const Vec3 w = factors.inverse_blocks[c] * local;
    for (std::size_t s = 0; s < 3; ++s) out[3 * c + s] = w[s];
  });
  return out;
}

std::vector<double> reduce_rhs(const BlockCovariance& cov, const LevelFactors& factors,
                               std::span<const double> rhs, ExecutionMode mode) {
  check_factors(cov, factors);
  const HierarchyTemplate& tmpl = cov.hierarchy();
  const int k = cov.level();
  if (rhs.size() != tmpl.node_count(k)) throw DimensionMismatch("right-hand side", tmpl.node_count(k), rhs.size());

  const auto clusters = tmpl.clusters(k);
  std::vector<Vec3> pushed(clusters.size());
  for_each_cluster(clusters.size(), mode, [&](std::size_t c) {
    const Cluster& cl = clusters[c];
    const Vec3 local{rhs[cl.interiors[0]], rhs[cl.interiors[1]], rhs[cl.interiors[2]]};
    pushed[c] = cov.coupling_blocks()[c] * (factors.inverse_blocks[c] * local);
  });

  std::vector<double> out(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(tmpl.junction_count(k)));
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (std::size_t r = 0; r < 3; ++r) out[clusters[c].corners[r]] -= pushed[c][r];
  return out;
}

const ChainLevel& ReductionChain::at(int level) const {
  if (level < 0 || level > top_level_) throw LevelOutOfRange(level, 0, top_level_);
  return levels_[static_cast<std::size_t>(top_level_ - level)];
}

const LevelFactors& ReductionChain::factors(int level) const {
  if (level < 1 || level > top_level_) throw LevelOutOfRange(level, 1, top_level_);
  return factors_[static_cast<std::size_t>(top_level_ - level)];
}

ReductionChain build_chain(const BlockCovariance& cov, const ReductionOptions& options) {
  const ValidationConfig& config = options.validation;
  if (options.check_positive_definite && !is_positive_definite(cov, config.pd_tol))
    throw NotPositiveDefinite("level " + std::to_string(cov.level()) + " input");

  ReductionChain chain;
  chain.top_level_ = cov.level();
  chain.mode_ = options.mode;
  chain.pd_tol_ = config.pd_tol;
  chain.levels_.reserve(static_cast<std::size_t>(cov.level()) + 1);
  chain.factors_.reserve(static_cast<std::size_t>(cov.level()) + 1);

  BlockCovariance current = cov;
  GammaVector gamma{cov.level(), std::vector<double>(cov.size(), 1.0)};
  for (int k = cov.level(); k >= 1; --k) {
    LevelFactors f = invert_interior_blocks(current, config.pd_tol, options.mode);
    chain.inversion_count_ += f.inverse_blocks.size();

    GammaVector next_gamma{k - 1, reduce_rhs(current, f, gamma.values, options.mode)};
    BlockCovariance next = schur_complement(current, f, config, options.mode);
    if (config.strict_mask) validate_structure(next, config);
    if (options.check_positive_definite && !is_positive_definite(next, config.pd_tol))
      throw NotPositiveDefinite("reduced level " + std::to_string(k - 1));

    chain.levels_.push_back({std::move(current), std::move(gamma)});
    chain.factors_.push_back(std::move(f));
    current = std::move(next);
    gamma = std::move(next_gamma);
  }
  chain.levels_.push_back({std::move(current), std::move(gamma)});
  chain.factors_.push_back(LevelFactors{0, {}});
  return chain;
}

}  // namespace hmvp
