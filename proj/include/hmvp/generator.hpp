#pragma once

#include <cstdint>
#include <memory>

#include "hmvp/block_covariance.hpp"

namespace hmvp {

/// Counter-based SplitMix64 ("splitmix64-counter/v1"): draw i of stream s is
/// mix64(s + (i + 1) * 0x9E3779B97F4A7C15), where mix64 is the SplitMix64
/// finalizer. Doubles use the top 53 bits.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    ++counter_;
    std::uint64_t z = seed_ + counter_ * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  long long integer(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long long>(next_u64() % span);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

struct GeneratorConfig {
  int level = 2;
  std::uint64_t seed = 0;
  double coupling_scale = 0.3;  // in [0, 1]
  bool integer_mode = false;
  bool strict_mask = false;
  int max_level = 8;
  double pd_tol = 1e-10;
};

/// Random positive definite covariance conforming to the level's mask.
/// Deterministic in the config. Throws GenerationFailed if the couplings
/// cannot be shrunk into a positive definite matrix within 40 halvings.
BlockCovariance generate(const GeneratorConfig& config,
                         std::shared_ptr<const HierarchyTemplate> tmpl = nullptr);

/// The 15-asset, level-2 integer covariance used as the worked example.
DenseMatrix paper_fixture_matrix();
BlockCovariance paper_fixture(std::shared_ptr<const HierarchyTemplate> tmpl = nullptr);

}  // namespace hmvp
