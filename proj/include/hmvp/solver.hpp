#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hmvp/schur.hpp"

namespace hmvp {

/// Portfolio weights on the nodes of one level. Entries may be negative
/// (short positions).
struct WeightVector {
  int level = 0;
  std::vector<double> values;
  bool normalized = false;
};

/// Variance split at one reduction step k -> k-1, in normalized units.
struct LevelVariance {
  int level = 0;
  double junction_variance = 0.0;  // <w*_{k-1}, w*_{k-1}> under Sigma_{k-1}
  double constant_term = 0.0;      // gamma_{k,in}^T X_k^{-1} gamma_{k,in} / normalizer^2
  double identity_residual = 0.0;  // relative gap of the two-level identity
};

struct LevelResidual {
  int level = 0;
  double residual = 0.0;  // ||Sigma_k w_k - gamma_k||_inf
};

struct SolverDiagnostics {
  std::size_t inversions = 0;
  std::vector<LevelResidual> residuals;  // top level first
  double variance_identity_gap = 0.0;    // |total_variance * normalizer - 1|
};

struct PortfolioReport {
  WeightVector weights;  // normalized, top level
  double total_variance = 0.0;
  double normalizer = 0.0;  // 1^T Sigma^{-1} 1
  std::vector<LevelVariance> per_level;
  SolverDiagnostics diagnostics;
  std::optional<double> portfolio_return;
};

/// Un-normalized solutions w_k = Sigma_k^{-1} gamma_k for every level,
/// indexed by level (entry 0 is the base solve).
std::vector<WeightVector> compute_level_weights(const ReductionChain& chain);

/// Un-normalized top-level weights Sigma_l^{-1} 1. Throws SingularBaseMatrix
/// if Sigma_0 cannot be inverted.
WeightVector compute_weights(const ReductionChain& chain);

/// w / (1^T w). Throws ZeroSum when |1^T w| <= 1e-14 ||w||_1.
WeightVector normalize(const WeightVector& w);

PortfolioReport variance_report(const ReductionChain& chain, const WeightVector& w_star);

/// Same, reusing weights already produced by compute_level_weights.
PortfolioReport variance_report(const ReductionChain& chain,
                                std::span<const WeightVector> level_weights,
                                const WeightVector& w_star);

/// The four summands of w^T Sigma w for arbitrary w, y on a level >= 1
/// covariance:
///   <w_jun, w_jun>_S + y_in^T X^{-1} y_in + <d, d>_X + 2 y_in^T d,
/// where d = w_in - X^{-1}(y_in - J w_jun).
struct VarianceTerms {
  double junction_schur = 0.0;
  double interior_load = 0.0;
  double deviation = 0.0;
  double cross = 0.0;

  double sum() const { return junction_schur + interior_load + deviation + cross; }
};

VarianceTerms variance_decomposition_general(const BlockCovariance& cov, std::span<const double> w,
                                             std::span<const double> y,
                                             double pd_tol = 1e-10);

/// w^T R.
double portfolio_return(const WeightVector& w, std::span<const double> returns);

/// End-to-end: chain, weights, normalization and report.
PortfolioReport solve(const BlockCovariance& cov, const ReductionOptions& options = {});

}  // namespace hmvp
