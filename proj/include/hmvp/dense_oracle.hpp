#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmvp/dense_matrix.hpp"

namespace hmvp::oracle {

/// P A P^T = L D L^T with unit lower-triangular L and diagonal pivoting.
/// Only positive definite inputs are supported (1x1 pivots).
struct Ldlt {
  std::vector<std::size_t> perm;  // row i of the factor is row perm[i] of A
  DenseMatrix lower;              // strictly lower part holds L
  std::vector<double> pivots;     // D
};

/// Throws NotPositiveDefinite if a pivot is not above pd_tol * max|diag|.
Ldlt ldlt_factor(const DenseMatrix& a, double pd_tol = 1e-10);
std::vector<double> ldlt_solve(const Ldlt& f, std::span<const double> b);
/// P^T L D L^T P, for self-checks.
DenseMatrix ldlt_reconstruct(const Ldlt& f);

struct OracleResult {
  std::vector<double> weights;  // normalized
  double total_variance = 0.0;
  double condition_estimate = 0.0;  // max pivot / min pivot
};

/// Sigma^{-1} 1 / (1^T Sigma^{-1} 1) by direct dense factorization.
OracleResult dense_min_variance(const DenseMatrix& sigma, double pd_tol = 1e-10);

/// T - J^T X^{-1} J for the split after `junction_size` rows, with no
/// knowledge of any hierarchy. Throws SingularTrailingBlock.
DenseMatrix dense_schur(const DenseMatrix& sigma, std::size_t junction_size,
                        double pd_tol = 1e-10);

/// Dense inverse via the factorization (test helper).
DenseMatrix dense_inverse(const DenseMatrix& a, double pd_tol = 1e-10);

}  // namespace hmvp::oracle
