#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmvp {

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorCategory { Validation, Singularity, Generation, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class LevelOutOfRange : public Error {
 public:
  LevelOutOfRange(int level, int lo, int hi)
      : Error(ErrorCategory::Validation,
              "level " + std::to_string(level) + " outside [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]") {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected, std::size_t actual)
      : Error(ErrorCategory::Validation, what + ": expected " + std::to_string(expected) +
                                             ", got " + std::to_string(actual)) {}
};

class NotSymmetric : public Error {
 public:
  NotSymmetric(std::size_t i, std::size_t j)
      : Error(ErrorCategory::Validation,
              "matrix not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")"),
        row(i),
        col(j) {}
  std::size_t row, col;
};

class SparsityViolation : public Error {
 public:
  SparsityViolation(std::size_t i, std::size_t j, double value)
      : Error(ErrorCategory::Validation,
              "nonzero covariance " + std::to_string(value) + " at (" + std::to_string(i) + ", " +
                  std::to_string(j) + ") is not permitted by the hierarchy"),
        row(i),
        col(j) {}
  std::size_t row, col;
};

class NonPositiveDiagonal : public Error {
 public:
  NonPositiveDiagonal(std::size_t i, double value)
      : Error(ErrorCategory::Validation, "non-positive variance " + std::to_string(value) +
                                             " at asset " + std::to_string(i)),
        index(i) {}
  std::size_t index;
};

class SingularInteriorBlock : public Error {
 public:
  SingularInteriorBlock(int level, std::size_t cluster)
      : Error(ErrorCategory::Singularity, "interior block of cluster " + std::to_string(cluster) +
                                              " at level " + std::to_string(level) +
                                              " is singular"),
        level(level),
        cluster(cluster) {}
  int level;
  std::size_t cluster;
};

class SingularBaseMatrix : public Error {
 public:
  SingularBaseMatrix() : Error(ErrorCategory::Singularity, "level-0 covariance is singular") {}
};

class FillOutsideMask : public Error {
 public:
  FillOutsideMask(int level, std::size_t i, std::size_t j)
      : Error(ErrorCategory::Internal,
              "reduction produced fill at (" + std::to_string(i) + ", " + std::to_string(j) +
                  ") outside the level-" + std::to_string(level) + " cluster triangles"),
        level(level),
        row(i),
        col(j) {}
  int level;
  std::size_t row, col;
};

class ZeroSum : public Error {
 public:
  ZeroSum() : Error(ErrorCategory::Singularity, "weights sum to zero; cannot normalize") {}
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(const std::string& where)
      : Error(ErrorCategory::Singularity, "matrix is not positive definite (" + where + ")") {}
};

class SingularTrailingBlock : public Error {
 public:
  SingularTrailingBlock()
      : Error(ErrorCategory::Singularity, "trailing block of the Schur split is singular") {}
};

class GenerationFailed : public Error {
 public:
  explicit GenerationFailed(const std::string& what) : Error(ErrorCategory::Generation, what) {}
};

}  // namespace hmvp
