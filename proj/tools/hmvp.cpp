// hmvp: command-line front end for the hierarchical minimum-variance solver.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#ifdef HMVP_HAVE_OPENMP
#include <omp.h>
#endif

#include "hmvp/bench.hpp"
#include "hmvp/dense_oracle.hpp"
#include "hmvp/error.hpp"
#include "hmvp/generator.hpp"
#include "hmvp/io.hpp"
#include "hmvp/solver.hpp"

namespace {

using namespace hmvp;

struct GlobalOptions {
  double zero_tol = 1e-12;
  double pd_tol = 1e-10;
  bool strict_mask = false;
  int threads = 1;

  ValidationConfig validation() const { return {zero_tol, pd_tol, strict_mask}; }
  ExecutionMode mode() const { return threads > 1 ? ExecutionMode::Parallel : ExecutionMode::Serial; }
  ReductionOptions reduction() const {
    ReductionOptions r;
    r.mode = mode();
    r.validation = validation();
    return r;
  }
};

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Validation: return 2;
    case ErrorCategory::Singularity: return 3;
    case ErrorCategory::Generation: return 4;
    case ErrorCategory::Internal: return 5;
  }
  return 1;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Writes to `path`, or stdout when empty.
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::Validation, "cannot write " + path);
  fn(out);
}

BlockCovariance load_covariance(const std::string& path, std::optional<int> level,
                                const GlobalOptions& g) {
  io::LoadedMatrix loaded = io::load_matrix(path);
  if (!loaded.matrix.square())
    throw DimensionMismatch("covariance columns", loaded.matrix.rows(), loaded.matrix.cols());
  int k = level ? *level : loaded.level ? *loaded.level : io::level_for_size(loaded.matrix.rows());
  if (k < 0 || k > HierarchyTemplate::kMaxSupportedLevel)
    throw LevelOutOfRange(k, 0, HierarchyTemplate::kMaxSupportedLevel);
  auto tmpl = std::make_shared<const HierarchyTemplate>(std::max(k, 1));
  return BlockCovariance::from_dense(loaded.matrix, tmpl, k, g.validation());
}

struct SolveArgs {
  std::string input;
  std::optional<int> level;
  std::string returns;
  std::string output;
};

int run_solve(const SolveArgs& a, const GlobalOptions& g) {
  const BlockCovariance cov = load_covariance(a.input, a.level, g);
  PortfolioReport report = solve(cov, g.reduction());
  if (!a.returns.empty()) {
    const std::vector<double> r = io::read_vector(a.returns);
    report.portfolio_return = portfolio_return(report.weights, r);
  }
  with_output(a.output, [&](std::ostream& out) { out << io::report_to_json(report).dump(2) << '\n'; });
  return 0;
}

struct ReduceArgs {
  std::string input;
  std::optional<int> level;
  std::string chain;
};

int run_reduce(const ReduceArgs& a, const GlobalOptions& g) {
  const BlockCovariance cov = load_covariance(a.input, a.level, g);
  const ReductionChain chain = build_chain(cov, g.reduction());
  with_output(a.chain, [&](std::ostream& out) { out << io::chain_to_json(chain).dump(2) << '\n'; });
  return 0;
}

struct VerifyArgs {
  std::string input;
  std::optional<int> level;
  double tolerance = 1e-9;
};

int run_verify(const VerifyArgs& a, const GlobalOptions& g) {
  const BlockCovariance cov = load_covariance(a.input, a.level, g);
  const PortfolioReport report = solve(cov, g.reduction());
  const oracle::OracleResult dense = oracle::dense_min_variance(cov.to_dense(), g.pd_tol);
  const double dev = max_relative_deviation(report.weights.values, dense.weights);
  std::cout << "n=" << cov.size() << " level=" << cov.level() << " max_relative_deviation=" << dev
            << " condition_estimate=" << dense.condition_estimate << '\n';
  if (dev > a.tolerance) {
    std::cerr << "hmvp: deviation above tolerance " << a.tolerance << '\n';
    return 1;
  }
  return 0;
}

struct GenerateArgs {
  int level = 2;
  std::uint64_t seed = 0;
  double coupling = 0.3;
  std::string out;
  bool paper_fixture = false;
  bool integer = false;
};

int run_generate(const GenerateArgs& a, const GlobalOptions& g) {
  DenseMatrix m;
  int level = a.level;
  if (a.paper_fixture) {
    m = paper_fixture_matrix();
    level = 2;
  } else {
    GeneratorConfig cfg;
    cfg.level = a.level;
    cfg.seed = a.seed;
    cfg.coupling_scale = a.coupling;
    cfg.integer_mode = a.integer;
    cfg.strict_mask = g.strict_mask;
    cfg.pd_tol = g.pd_tol;
    m = generate(cfg).to_dense();
  }
  with_output(a.out, [&](std::ostream& out) {
    if (ends_with(a.out, ".json"))
      out << nlohmann::json{{"level", level}, {"matrix", io::matrix_to_json(m)}}.dump() << '\n';
    else
      io::write_matrix_csv(out, m);
  });
  return 0;
}

int run_inspect(int level, bool mask) {
  if (level < 0 || level > HierarchyTemplate::kMaxSupportedLevel)
    throw LevelOutOfRange(level, 0, HierarchyTemplate::kMaxSupportedLevel);
  const HierarchyTemplate tmpl(std::max(level, 1));
  std::cout << io::template_to_json(tmpl, level, mask).dump(2) << '\n';
  return 0;
}

struct BenchArgs {
  std::vector<int> levels{2, 3, 4, 5, 6};
  int seeds = 1;
  int runs = 5;
  std::string out;
  bool parallel_kernels = false;
  bool no_dense = false;
};

int run_bench_cmd(const BenchArgs& a) {
  BenchOptions opt;
  opt.levels = a.levels;
  opt.seeds_per_level = a.seeds;
  opt.runs = a.runs;
  opt.mode = a.parallel_kernels ? ExecutionMode::Parallel : ExecutionMode::Serial;
  opt.run_dense = !a.no_dense;
#ifdef HMVP_HAVE_OPENMP
  if (!a.parallel_kernels) omp_set_num_threads(1);
#endif
  const std::vector<BenchRecord> records = run_bench(opt);
  with_output(a.out, [&](std::ostream& out) { write_bench_csv(out, records); });
  for (const BenchRecord& r : records)
    if (!r.error.empty()) std::cerr << "level " << r.level << ": " << r.error << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-variance portfolios on hierarchical covariance structures"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--zero-tol", g.zero_tol, "Entries at or below this magnitude are structural zeros")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--pd-tol", g.pd_tol, "Pivot threshold relative to the largest variance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--strict-mask", g.strict_mask, "Require the strict corner/interior edge pattern");
  app.add_option("--threads", g.threads, "OpenMP threads for the cluster kernels")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Minimum-variance weights via recursive reduction");
  solve_cmd->add_option("--input", solve_args.input, "Covariance matrix (.csv or .json)")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--level", solve_args.level, "Hierarchy level (inferred from size if omitted)");
  solve_cmd->add_option("--returns", solve_args.returns, "Expected returns, one per asset")
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--output", solve_args.output, "Report JSON path (stdout if omitted)");

  ReduceArgs reduce_args;
  auto* reduce_cmd = app.add_subcommand("reduce", "Emit the reduction chain");
  reduce_cmd->add_option("--input", reduce_args.input)->required()->check(CLI::ExistingFile);
  reduce_cmd->add_option("--level", reduce_args.level);
  reduce_cmd->add_option("--emit-chain", reduce_args.chain, "Chain JSON path (stdout if omitted)");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Compare recursive and dense weights");
  verify_cmd->add_option("--input", verify_args.input)->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--level", verify_args.level);
  verify_cmd->add_option("--tol", verify_args.tolerance, "Maximum relative weight deviation")
      ->capture_default_str();

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand("generate", "Write a random conforming covariance");
  gen_cmd->add_option("--level", gen_args.level)->capture_default_str()->check(CLI::Range(1, 8));
  gen_cmd->add_option("--seed", gen_args.seed)->capture_default_str();
  gen_cmd->add_option("--coupling", gen_args.coupling)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--out", gen_args.out, "Output path; .json adds the level (stdout if omitted)");
  gen_cmd->add_flag("--paper-fixture", gen_args.paper_fixture, "Write the built-in 15-asset example");
  gen_cmd->add_flag("--integer", gen_args.integer, "Small integer entries");

  int inspect_level = 1;
  bool inspect_mask = false;
  auto* inspect_cmd = app.add_subcommand("inspect", "Dump the hierarchy template as JSON");
  inspect_cmd->add_option("--level", inspect_level)->required();
  inspect_cmd->add_flag("--mask", inspect_mask, "Include the permitted edge list");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Time recursive and dense solves per level");
  bench_cmd->add_option("--levels", bench_args.levels)->capture_default_str()->delimiter(',');
  bench_cmd->add_option("--seeds", bench_args.seeds)->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--runs", bench_args.runs)->capture_default_str()->check(CLI::Range(5, 1000));
  bench_cmd->add_option("--out", bench_args.out, "CSV path (stdout if omitted)");
  bench_cmd->add_flag("--parallel-kernels", bench_args.parallel_kernels);
  bench_cmd->add_flag("--no-dense", bench_args.no_dense, "Skip the dense oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

#ifdef HMVP_HAVE_OPENMP
  omp_set_num_threads(g.threads);
#endif

  try {
    if (*solve_cmd) return run_solve(solve_args, g);
    if (*reduce_cmd) return run_reduce(reduce_args, g);
    if (*verify_cmd) return run_verify(verify_args, g);
    if (*gen_cmd) return run_generate(gen_args, g);
    if (*inspect_cmd) return run_inspect(inspect_level, inspect_mask);
    if (*bench_cmd) return run_bench_cmd(bench_args);
  } catch (const Error& e) {
    std::cerr << "hmvp: error: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "hmvp: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
