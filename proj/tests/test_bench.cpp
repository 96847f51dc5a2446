#include <gtest/gtest.h>

#include <sstream>

#include "hmvp/bench.hpp"

namespace hmvp {
namespace {

TEST(Bench, RecordsForSmallLevels) {
  BenchOptions opt;
  opt.levels = {1, 2, 4};
  opt.runs = 5;
  opt.min_sample_seconds = 0.0;
  const auto records = run_bench(opt);
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[1].n_assets, 15u);
  EXPECT_EQ(records[1].inversions_3x3, 5u);
  EXPECT_EQ(records[2].n_assets, 123u);
  EXPECT_EQ(records[2].inversions_3x3, 1u + 3u + 9u + 27u + 1u);
  for (const auto& r : records) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_GT(r.recursive_s, 0.0);
    EXPECT_GT(r.dense_s, 0.0);
    EXPECT_LE(r.max_weight_deviation, 1e-9);
  }
}

TEST(Bench, ErrorsDoNotAbortSweep) {
  BenchOptions opt;
  opt.levels = {0, 1};
  opt.run_dense = false;
  opt.min_sample_seconds = 0.0;
  const auto records = run_bench(opt);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_FALSE(records[0].error.empty());
  EXPECT_TRUE(records[1].error.empty());
}

TEST(Bench, CsvLayout) {
  std::vector<BenchRecord> records(2);
  records[0] = {2, 15, 1e-5, 2e-5, 5, 1e-15, ""};
  records[1] = {3, 42, 0, 0, 0, 0, "bad, \"thing\""};
  std::ostringstream out;
  write_bench_csv(out, records);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "level,n,recursive_s,dense_s,inversions,max_dev,error");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("2,15,", 0), 0u);
  std::getline(in, line);
  EXPECT_NE(line.find("\"bad, \"\"thing\"\"\""), std::string::npos);
}

TEST(Bench, MaxRelativeDeviation) {
  const std::vector<double> a{1.0, 2.0, 3.1};
  const std::vector<double> b{1.0, 2.0, 3.0};
  EXPECT_NEAR(max_relative_deviation(a, b), 0.1 / 3.0, 1e-15);
  EXPECT_EQ(max_relative_deviation(b, b), 0.0);
}

}  // namespace
}  // namespace hmvp
