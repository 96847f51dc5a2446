#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hmvp/dense_matrix.hpp"
#include "hmvp/hierarchy.hpp"
#include "hmvp/solver.hpp"

namespace hmvp::io {

/// A matrix read from disk; `level` is set only when the file states it.
struct LoadedMatrix {
  DenseMatrix matrix;
  std::optional<int> level;
};

/// n rows of n comma-separated decimals, no header.
DenseMatrix read_matrix_csv(std::istream& in);
/// {"level": k, "matrix": [[...], ...]}; "level" is optional.
LoadedMatrix read_matrix_json(std::istream& in);
/// Dispatches on the extension (.json, anything else is CSV).
LoadedMatrix load_matrix(const std::string& path);

/// Writes with round-trip precision (17 significant digits).
void write_matrix_csv(std::ostream& out, const DenseMatrix& m);
nlohmann::json matrix_to_json(const DenseMatrix& m);

/// All numbers in the file, comma- or newline-separated.
std::vector<double> read_vector(const std::string& path);

/// Level whose node count equals n.
int level_for_size(std::size_t n);

nlohmann::json report_to_json(const PortfolioReport& report);
nlohmann::json chain_to_json(const ReductionChain& chain);
nlohmann::json template_to_json(const HierarchyTemplate& tmpl, int level, bool include_mask);

}  // namespace hmvp::io
