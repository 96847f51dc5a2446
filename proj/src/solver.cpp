#include "hmvp/solver.hpp"

#include <algorithm>
#include <cmath>

#include "hmvp/error.hpp"

namespace hmvp {

namespace {

double inf_norm_diff(std::span<const double> a, std::span<const double> b) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

double relative_gap(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// gamma_in^T X^{-1} gamma_in, cluster by cluster.
double interior_load(const BlockCovariance& cov, const LevelFactors& factors,
                     std::span<const double> y) {
  const auto clusters = cov.hierarchy().clusters(cov.level());
  double s = 0.0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& in = clusters[c].interiors;
    const Vec3 local{y[in[0]], y[in[1]], y[in[2]]};
    s += dot(local, factors.inverse_blocks[c] * local);
  }
  return s;
}

}  // namespace

std::vector<WeightVector> compute_level_weights(const ReductionChain& chain) {
  const int top = chain.top_level();
  std::vector<WeightVector> out(static_cast<std::size_t>(top) + 1);

  const ChainLevel& base = chain.at(0);
  const auto inv = invert_symmetric3(base.sigma.base(), chain.pd_tol());
  if (!inv) throw SingularBaseMatrix();
  const Vec3 w0 = *inv * Vec3{base.gamma.values[0], base.gamma.values[1], base.gamma.values[2]};
  out[0] = {0, {w0.begin(), w0.end()}, false};

  for (int k = 1; k <= top; ++k) {
    const ChainLevel& lvl = chain.at(k);
    const auto& lower = out[static_cast<std::size_t>(k - 1)].values;
    std::vector<double> values = lower;
    const auto interior =
        interior_solve(lvl.sigma, chain.factors(k), lower, lvl.gamma.values, chain.mode());
    values.insert(values.end(), interior.begin(), interior.end());
    out[static_cast<std::size_t>(k)] = {k, std::move(values), false};
  }
  return out;
}

WeightVector compute_weights(const ReductionChain& chain) {
  auto all = compute_level_weights(chain);
  return std::move(all.back());
}

WeightVector normalize(const WeightVector& w) {
  double sum = 0.0;
  double l1 = 0.0;
  for (double v : w.values) {
    sum += v;
    l1 += std::abs(v);
  }
  if (!(std::abs(sum) > 1e-14 * l1)) throw ZeroSum();
  WeightVector out{w.level, w.values, true};
  for (double& v : out.values) v /= sum;
  return out;
}

PortfolioReport variance_report(const ReductionChain& chain, const WeightVector& w_star) {
  const auto weights = compute_level_weights(chain);
  return variance_report(chain, weights, w_star);
}

PortfolioReport variance_report(const ReductionChain& chain,
                                std::span<const WeightVector> weights,
                                const WeightVector& w_star) {
  const int top = chain.top_level();
  const BlockCovariance& sigma_top = chain.at(top).sigma;
  if (w_star.values.size() != sigma_top.size())
    throw DimensionMismatch("weight vector", sigma_top.size(), w_star.values.size());
  if (weights.size() != static_cast<std::size_t>(top) + 1)
    throw DimensionMismatch("level weights", static_cast<std::size_t>(top) + 1, weights.size());

  const auto& w_top = weights.back().values;
  double normalizer = 0.0;
  for (double v : w_top) normalizer += v;

  PortfolioReport report;
  report.weights = w_star;
  report.normalizer = normalizer;
  report.total_variance = sigma_top.quadratic_form(w_star.values);
  report.diagnostics.inversions = chain.inversion_count() + 1;
  report.diagnostics.variance_identity_gap =
      std::abs(report.total_variance * normalizer - 1.0);

  const double eta2 = normalizer * normalizer;
  for (int k = top; k >= 0; --k) {
    const ChainLevel& lvl = chain.at(k);
    const auto& wk = weights[static_cast<std::size_t>(k)].values;
    const auto applied = lvl.sigma.apply(wk);
    report.diagnostics.residuals.push_back({k, inf_norm_diff(applied, lvl.gamma.values)});
    if (k == 0) break;

    const auto& wl = weights[static_cast<std::size_t>(k - 1)].values;
    const double upper = lvl.sigma.quadratic_form(wk) / eta2;
    LevelVariance lv;
    lv.level = k;
    lv.junction_variance = chain.at(k - 1).sigma.quadratic_form(wl) / eta2;
    lv.constant_term = interior_load(lvl.sigma, chain.factors(k), lvl.gamma.values) / eta2;
    lv.identity_residual = relative_gap(upper, lv.junction_variance + lv.constant_term);
    report.per_level.push_back(lv);
  }
  return report;
}

VarianceTerms variance_decomposition_general(const BlockCovariance& cov, std::span<const double> w,
                                             std::span<const double> y, double pd_tol) {
  const int k = cov.level();
  if (k < 1) throw LevelOutOfRange(k, 1, cov.hierarchy().max_level());
  const std::size_t n = cov.size();
  if (w.size() != n) throw DimensionMismatch("weight vector", n, w.size());
  if (y.size() != n) throw DimensionMismatch("right-hand side", n, y.size());

  const HierarchyTemplate& tmpl = cov.hierarchy();
  const std::size_t jc = tmpl.junction_count(k);
  const LevelFactors factors = invert_interior_blocks(cov, pd_tol);
  const auto h = interior_solve(cov, factors, w.first(jc), y);

  VarianceTerms terms;
  double t_term = 0.0;
  for (std::size_t j = 0; j < jc; ++j) t_term += cov.t_diag()[j] * w[j] * w[j];
  for (const FillEntry& f : cov.fill_t())
    if (f.row < jc && f.col < jc) t_term += (f.row == f.col ? 1.0 : 2.0) * f.value * w[f.row] * w[f.col];

  const auto clusters = tmpl.clusters(k);
  double correction = 0.0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Cluster& cl = clusters[c];
    const Vec3 corners{w[cl.corners[0]], w[cl.corners[1]], w[cl.corners[2]]};
    const Vec3 u = transpose_times(cov.coupling_blocks()[c], corners);
    correction += dot(u, factors.inverse_blocks[c] * u);

    const Vec3 yin{y[cl.interiors[0]], y[cl.interiors[1]], y[cl.interiors[2]]};
    terms.interior_load += dot(yin, factors.inverse_blocks[c] * yin);

    const Vec3 d{w[cl.interiors[0]] - h[3 * c], w[cl.interiors[1]] - h[3 * c + 1],
                 w[cl.interiors[2]] - h[3 * c + 2]};
    terms.deviation += dot(d, cov.interior_blocks()[c] * d);
    terms.cross += 2.0 * dot(yin, d);
  }
  terms.junction_schur = t_term - correction;
  return terms;
}

double portfolio_return(const WeightVector& w, std::span<const double> returns) {
  if (returns.size() != w.values.size())
    throw DimensionMismatch("returns vector", w.values.size(), returns.size());
  double s = 0.0;
  for (std::size_t i = 0; i < returns.size(); ++i) s += w.values[i] * returns[i];
  return s;
}

PortfolioReport solve(const BlockCovariance& cov, const ReductionOptions& options) {
  const ReductionChain chain = build_chain(cov, options);
  const auto weights = compute_level_weights(chain);
  return variance_report(chain, weights, normalize(weights.back()));
}

}  // namespace hmvp
