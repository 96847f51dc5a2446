#include "hmvp/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "hmvp/error.hpp"

namespace hmvp::io {

namespace {

std::vector<double> parse_numbers(const std::string& line, std::size_t line_no) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(cell.substr(first), &used));
    } catch (const std::exception&) {
      throw Error(ErrorCategory::Validation,
                  fmt::format("line {}: cannot parse '{}' as a number", line_no, cell));
    }
  }
  return values;
}

}  // namespace

DenseMatrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(parse_numbers(line, line_no));
  }
  const std::size_t n = rows.size();
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw DimensionMismatch(fmt::format("row {} length", i), n, rows[i].size());
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

LoadedMatrix read_matrix_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::Validation, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.contains("matrix") || !doc["matrix"].is_array())
    throw Error(ErrorCategory::Validation, "JSON input needs a \"matrix\" array");
  const auto& rows = doc["matrix"];
  const std::size_t n = rows.size();
  LoadedMatrix out{DenseMatrix(n, n), std::nullopt};
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n)
      throw DimensionMismatch(fmt::format("row {} length", i), n, rows[i].size());
    for (std::size_t j = 0; j < n; ++j) out.matrix(i, j) = rows[i][j].get<double>();
  }
  if (doc.contains("level")) out.level = doc["level"].get<int>();
  return out;
}

LoadedMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::Validation, "cannot open " + path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return read_matrix_json(in);
  return {read_matrix_csv(in), std::nullopt};
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    std::string line;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) line += ',';
      line += fmt::format("{:.17g}", row[j]);
    }
    out << line << '\n';
  }
}

nlohmann::json matrix_to_json(const DenseMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

std::vector<double> read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::Validation, "cannot open " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    const auto row = parse_numbers(line, ++line_no);
    values.insert(values.end(), row.begin(), row.end());
  }
  return values;
}

int level_for_size(std::size_t n) {
  std::size_t pow = 3;  // 3^(level+1)
  for (int level = 0; level <= HierarchyTemplate::kMaxSupportedLevel; ++level) {
    if ((pow + 3) / 2 == n) return level;
    pow *= 3;
  }
  throw Error(ErrorCategory::Validation,
              fmt::format("{} assets does not match any hierarchy level", n));
}

nlohmann::json report_to_json(const PortfolioReport& report) {
  nlohmann::json per_level = nlohmann::json::array();
  for (const LevelVariance& lv : report.per_level) {
    per_level.push_back({{"level", lv.level},
                         {"junction_variance", lv.junction_variance},
                         {"constant_term", lv.constant_term},
                         {"identity_residual", lv.identity_residual}});
  }
  nlohmann::json residuals = nlohmann::json::array();
  for (const LevelResidual& r : report.diagnostics.residuals)
    residuals.push_back({{"level", r.level}, {"residual", r.residual}});

  nlohmann::json doc = {
      {"weights", report.weights.values},
      {"total_variance", report.total_variance},
      {"normalizer", report.normalizer},
      {"per_level", per_level},
      {"diagnostics",
       {{"inversions", report.diagnostics.inversions},
        {"residuals", residuals},
        {"variance_identity_gap", report.diagnostics.variance_identity_gap}}},
  };
  if (report.portfolio_return) doc["portfolio_return"] = *report.portfolio_return;
  return doc;
}

nlohmann::json chain_to_json(const ReductionChain& chain) {
  nlohmann::json levels = nlohmann::json::array();
  for (const ChainLevel& lvl : chain.levels()) {
    levels.push_back({{"level", lvl.sigma.level()},
                      {"sigma", matrix_to_json(lvl.sigma.to_dense())},
                      {"gamma", lvl.gamma.values}});
  }
  return {{"top_level", chain.top_level()},
          {"inversions", chain.inversion_count()},
          {"levels", levels}};
}

nlohmann::json template_to_json(const HierarchyTemplate& tmpl, int level, bool include_mask) {
  nlohmann::json doc = {{"family", "sierpinski"},
                        {"level", level},
                        {"node_count", tmpl.node_count(level)}};
  if (level >= 1) {
    doc["junction_count"] = tmpl.junction_count(level);
    doc["interior_count"] = tmpl.interior_count(level);
    doc["cluster_count"] = tmpl.cluster_count(level);
    nlohmann::json clusters = nlohmann::json::array();
    for (const Cluster& cl : tmpl.clusters(level)) {
      clusters.push_back({{"index", cl.index},
                          {"corners", cl.corners},
                          {"oriented_corners", cl.oriented_corners},
                          {"interiors", cl.interiors}});
    }
    doc["clusters"] = clusters;
  }
  if (include_mask) {
    const auto strict = tmpl.adjacency_mask(level, true);
    const auto loose = tmpl.adjacency_mask(level, false);
    nlohmann::json edges = nlohmann::json::array();
    for (std::size_t i = 0; i < loose.size(); ++i)
      for (std::size_t j = i + 1; j < loose.size(); ++j)
        if (loose(i, j)) edges.push_back({{"i", i}, {"j", j}, {"strict", strict(i, j)}});
    doc["edges"] = edges;
  }
  return doc;
}

}  // namespace hmvp::io
