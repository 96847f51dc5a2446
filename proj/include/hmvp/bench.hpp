#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hmvp/schur.hpp"

namespace hmvp {

/// One (level, seed) measurement. Times are medians over the timed runs.
struct BenchRecord {
  int level = 0;
  std::size_t n_assets = 0;
  double recursive_s = 0.0;
  double dense_s = 0.0;
  std::size_t inversions_3x3 = 0;
  double max_weight_deviation = 0.0;
  std::string error;  // empty on success
};

struct BenchOptions {
  std::vector<int> levels{2, 3, 4, 5, 6};
  int seeds_per_level = 1;
  int runs = 5;                      // median of at least 5
  double min_sample_seconds = 2e-3;  // repeat short operations up to this
  double coupling_scale = 0.3;
  std::uint64_t base_seed = 1;
  ExecutionMode mode = ExecutionMode::Serial;
  bool run_dense = true;
};

/// Generates one instance per (level, seed), then times the recursive path
/// (chain + weights + normalization) and the dense oracle on it. Instance
/// generation is outside the timed region. Failures are recorded in the
/// error column and the sweep continues.
std::vector<BenchRecord> run_bench(const BenchOptions& options);

/// Header: level,n,recursive_s,dense_s,inversions,max_dev,error
void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records);

/// max_i |a_i - b_i| / max_i |b_i|.
double max_relative_deviation(std::span<const double> a, std::span<const double> b);

}  // namespace hmvp
