#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmvp/block_covariance.hpp"

namespace hmvp {

/// Serial is the reference path. Parallel runs the per-cluster work with
/// OpenMP and merges in canonical cluster order, so both produce bitwise
/// identical results.
enum class ExecutionMode { Serial, Parallel };

/// Cached inverses of the interior blocks of one level.
struct LevelFactors {
  int level = 0;
  std::vector<Mat3> inverse_blocks;
};

/// Inverts every interior block of `cov` (one 3x3 inversion per cluster).
/// Throws SingularInteriorBlock for the first singular cluster in canonical
/// order.
LevelFactors invert_interior_blocks(const BlockCovariance& cov, double pd_tol,
                                    ExecutionMode mode = ExecutionMode::Serial);

/// T - J^T X^{-1} J, re-blocked as a level-(k-1) covariance. Corrections
/// that land outside the next level's cluster triangles are kept in fill_t
/// and reported as FillOutsideMask.
BlockCovariance schur_complement(const BlockCovariance& cov, const LevelFactors& factors,
                                 const ValidationConfig& config = {},
                                 ExecutionMode mode = ExecutionMode::Serial);

/// Convenience overload that inverts the interior blocks itself.
BlockCovariance schur_complement(const BlockCovariance& cov, const ValidationConfig& config = {},
                                 ExecutionMode mode = ExecutionMode::Serial);

/// Interior values implied by junction values v and right-hand side y:
/// X^{-1} (y_in - J v). Returns a vector over the interior segment.
std::vector<double> interior_solve(const BlockCovariance& cov, const LevelFactors& factors,
                                   std::span<const double> junction_values,
                                   std::span<const double> rhs,
                                   ExecutionMode mode = ExecutionMode::Serial);

/// Right-hand side carried one level down: y_jun - J^T X^{-1} y_in, indexed
/// by the nodes of level k-1.
std::vector<double> reduce_rhs(const BlockCovariance& cov, const LevelFactors& factors,
                               std::span<const double> rhs,
                               ExecutionMode mode = ExecutionMode::Serial);

struct ReductionOptions {
  ExecutionMode mode = ExecutionMode::Serial;
  ValidationConfig validation{};
  /// Re-check positive definiteness of every Sigma_k by factorization.
  bool check_positive_definite = true;
};

struct ChainLevel {
  BlockCovariance sigma;
  GammaVector gamma;
};

/// Sigma_l, ..., Sigma_0 with their transformed right-hand sides gamma_k,
/// plus the interior-block inverses of every level >= 1. Immutable.
class ReductionChain {
 public:
  int top_level() const { return top_level_; }

  /// Entry for level k (0 <= k <= top_level).
  const ChainLevel& at(int level) const;
  /// Levels ordered from top_level down to 0.
  std::span<const ChainLevel> levels() const { return levels_; }

  const LevelFactors& factors(int level) const;

  /// 3x3 inversions performed while building the chain (interior blocks
  /// only; the base solve belongs to the weight recursion).
  std::size_t inversion_count() const { return inversion_count_; }
  ExecutionMode mode() const { return mode_; }
  double pd_tol() const { return pd_tol_; }

 private:
  friend ReductionChain build_chain(const BlockCovariance&, const ReductionOptions&);

  int top_level_ = 0;
  std::vector<ChainLevel> levels_;
  std::vector<LevelFactors> factors_;  // parallel to levels_, empty for level 0
  std::size_t inversion_count_ = 0;
  ExecutionMode mode_ = ExecutionMode::Serial;
  double pd_tol_ = 1e-10;
};

ReductionChain build_chain(const BlockCovariance& cov, const ReductionOptions& options = {});

}  // namespace hmvp
