#include "hmvp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "hmvp/dense_oracle.hpp"
#include "hmvp/error.hpp"
#include "hmvp/generator.hpp"
#include "hmvp/solver.hpp"

namespace hmvp {

namespace {

using Clock = std::chrono::steady_clock;

// Median over `runs` samples; each sample repeats fn until it has taken at
// least min_seconds and reports the per-call time.
template <class Fn>
double median_time(int runs, double min_seconds, Fn&& fn) {
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(runs));
  fn();  // warm-up
  for (int r = 0; r < runs; ++r) {
    std::size_t calls = 0;
    const auto start = Clock::now();
    double elapsed = 0.0;
    do {
      fn();
      ++calls;
      elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    } while (elapsed < min_seconds);
    samples.push_back(elapsed / static_cast<double>(calls));
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

double max_relative_deviation(std::span<const double> a, std::span<const double> b) {
  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    scale = std::max(scale, std::abs(b[i]));
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

std::vector<BenchRecord> run_bench(const BenchOptions& options) {
  std::vector<BenchRecord> records;
  const int runs = std::max(options.runs, 5);
  for (int level : options.levels) {
    auto tmpl = std::make_shared<const HierarchyTemplate>(std::max(level, 1));
    for (int s = 0; s < options.seeds_per_level; ++s) {
      BenchRecord rec;
      rec.level = level;
      try {
        rec.n_assets = tmpl->node_count(level);
        GeneratorConfig gen;
        gen.level = level;
        gen.max_level = HierarchyTemplate::kMaxSupportedLevel;
        gen.seed = options.base_seed + static_cast<std::uint64_t>(s);
        gen.coupling_scale = options.coupling_scale;
        const BlockCovariance cov = generate(gen, tmpl);

        ReductionOptions ro;
        ro.mode = options.mode;
        ro.check_positive_definite = false;

        WeightVector recursive;
        std::size_t inversions = 0;
        rec.recursive_s = median_time(runs, options.min_sample_seconds, [&] {
          const ReductionChain chain = build_chain(cov, ro);
          recursive = normalize(compute_weights(chain));
          inversions = chain.inversion_count() + 1;
        });
        rec.inversions_3x3 = inversions;

        if (options.run_dense) {
          const DenseMatrix dense = cov.to_dense();
          oracle::OracleResult reference;
          rec.dense_s = median_time(runs, options.min_sample_seconds,
                                    [&] { reference = oracle::dense_min_variance(dense); });
          rec.max_weight_deviation = max_relative_deviation(recursive.values, reference.weights);
        }
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << "level,n,recursive_s,dense_s,inversions,max_dev,error\n";
  for (const BenchRecord& r : records) {
    out << fmt::format("{},{},{:.9g},{:.9g},{},{:.3e},{}\n", r.level, r.n_assets, r.recursive_s,
                       r.dense_s, r.inversions_3x3, r.max_weight_deviation, csv_escape(r.error));
  }
}

}  // namespace hmvp
