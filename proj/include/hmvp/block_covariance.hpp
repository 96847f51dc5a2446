#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "hmvp/dense_matrix.hpp"
#include "hmvp/hierarchy.hpp"
#include "hmvp/small_matrix.hpp"

namespace hmvp {

struct ValidationConfig {
  double zero_tol = 1e-12;  // |sigma_ij| at or below this is a structural zero
  double pd_tol = 1e-10;    // pivot threshold, relative to the largest variance
  bool strict_mask = false;
};

/// Off-structure symmetric entry (row < col). Reduction only ever writes here
/// if it creates a correlation outside the next level's cluster triangles.
struct FillEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// Level-k covariance in block form [[T, J^T], [J, X]].
///
/// T is diagonal (t_diag), X is block diagonal with one symmetric 3x3 block
/// per cluster, and J is stored per cluster as a 3x3 matrix whose (r, s)
/// entry couples sorted corner r with interior slot s. Level 0 is a dense
/// symmetric 3x3 with no split.
class BlockCovariance {
 public:
  /// Level 0.
  BlockCovariance(std::shared_ptr<const HierarchyTemplate> tmpl, const Mat3& base);

  /// Level >= 1. Sizes are checked against the template.
  BlockCovariance(std::shared_ptr<const HierarchyTemplate> tmpl, int level,
                  std::vector<double> t_diag, std::vector<Mat3> interior_blocks,
                  std::vector<Mat3> coupling_blocks, std::vector<FillEntry> fill_t = {});

  /// Ingests a dense symmetric matrix, rejecting entries the hierarchy does
  /// not permit.
  static BlockCovariance from_dense(const DenseMatrix& matrix,
                                    std::shared_ptr<const HierarchyTemplate> tmpl, int level,
                                    const ValidationConfig& config = {});

  DenseMatrix to_dense() const;

  int level() const { return level_; }
  std::size_t size() const;
  const HierarchyTemplate& hierarchy() const { return *tmpl_; }
  const std::shared_ptr<const HierarchyTemplate>& hierarchy_ptr() const { return tmpl_; }

  const Mat3& base() const { return base_; }
  std::span<const double> t_diag() const { return t_diag_; }
  std::span<const Mat3> interior_blocks() const { return interior_blocks_; }
  std::span<const Mat3> coupling_blocks() const { return coupling_blocks_; }
  std::span<const FillEntry> fill_t() const { return fill_t_; }

  /// Sigma * x using the block structure.
  std::vector<double> apply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
  double max_diagonal() const;

 private:
  std::shared_ptr<const HierarchyTemplate> tmpl_;
  int level_ = 0;
  Mat3 base_{};
  std::vector<double> t_diag_;
  std::vector<Mat3> interior_blocks_;
  std::vector<Mat3> coupling_blocks_;
  std::vector<FillEntry> fill_t_;
};

struct GammaVector {
  int level = 0;
  std::vector<double> values;
};

struct Partition {
  std::vector<double> junction;
  std::vector<double> interior;
};

/// Splits a level vector into its junction and interior segments.
Partition partition(const HierarchyTemplate& tmpl, int level, std::span<const double> y);

/// True iff a symmetric elimination of the matrix (interiors cluster by
/// cluster, level by level, then the base triangle) has every pivot above
/// pd_tol * max_diagonal().
bool is_positive_definite(const BlockCovariance& cov, double pd_tol = 1e-10);

/// Throws FillOutsideMask if fill_t holds any entry above zero_tol,
/// SparsityViolation for couplings outside a strict mask, and
/// NonPositiveDiagonal for non-positive variances.
void validate_structure(const BlockCovariance& cov, const ValidationConfig& config);

}  // namespace hmvp
