#include "hmvp/block_covariance.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "hmvp/error.hpp"

namespace hmvp {

namespace {

double symmetric_value(const DenseMatrix& m, std::size_t i, std::size_t j) {
  const double a = m(i, j);
  const double b = m(j, i);
  return a == b ? a : 0.5 * (a + b);
}

}  // namespace

BlockCovariance::BlockCovariance(std::shared_ptr<const HierarchyTemplate> tmpl, const Mat3& base)
    : tmpl_(std::move(tmpl)), level_(0), base_(base) {}

BlockCovariance::BlockCovariance(std::shared_ptr<const HierarchyTemplate> tmpl, int level,
                                 std::vector<double> t_diag, std::vector<Mat3> interior_blocks,
                                 std::vector<Mat3> coupling_blocks, std::vector<FillEntry> fill_t)
    : tmpl_(std::move(tmpl)),
      level_(level),
      t_diag_(std::move(t_diag)),
      interior_blocks_(std::move(interior_blocks)),
      coupling_blocks_(std::move(coupling_blocks)),
      fill_t_(std::move(fill_t)) {
  if (level < 1) throw LevelOutOfRange(level, 1, tmpl_->max_level());
  const std::size_t jc = tmpl_->junction_count(level);
  const std::size_t cc = tmpl_->cluster_count(level);
  if (t_diag_.size() != jc) throw DimensionMismatch("junction variances", jc, t_diag_.size());
  if (interior_blocks_.size() != cc)
    throw DimensionMismatch("interior blocks", cc, interior_blocks_.size());
  if (coupling_blocks_.size() != cc)
    throw DimensionMismatch("coupling blocks", cc, coupling_blocks_.size());
}

BlockCovariance BlockCovariance::from_dense(const DenseMatrix& matrix,
                                            std::shared_ptr<const HierarchyTemplate> tmpl,
                                            int level, const ValidationConfig& config) {
  const std::size_t n = tmpl->node_count(level);
  if (matrix.rows() != n) throw DimensionMismatch("matrix rows", n, matrix.rows());
  if (matrix.cols() != n) throw DimensionMismatch("matrix columns", n, matrix.cols());

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = matrix(i, j);
      const double b = matrix(j, i);
      const double scale = std::max({1.0, std::abs(a), std::abs(b)});
      if (!(std::abs(a - b) <= config.zero_tol * scale)) throw NotSymmetric(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!(matrix(i, i) > 0.0)) throw NonPositiveDiagonal(i, matrix(i, i));

  if (level == 0) {
    Mat3 base;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        base(r, c) = symmetric_value(matrix, static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    return BlockCovariance(std::move(tmpl), base);
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = symmetric_value(matrix, i, j);
      if (std::abs(v) > config.zero_tol && !tmpl->permitted(level, i, j, config.strict_mask))
        throw SparsityViolation(i, j, v);
    }
  }

  const std::size_t jc = tmpl->junction_count(level);
  std::vector<double> t_diag(jc);
  for (std::size_t j = 0; j < jc; ++j) t_diag[j] = matrix(j, j);

  const auto clusters = tmpl->clusters(level);
  std::vector<Mat3> blocks(clusters.size());
  std::vector<Mat3> couplings(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Cluster& cl = clusters[c];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        blocks[c](a, b) = symmetric_value(matrix, cl.interiors[static_cast<std::size_t>(a)],
                                          cl.interiors[static_cast<std::size_t>(b)]);
        couplings[c](a, b) = symmetric_value(matrix, cl.corners[static_cast<std::size_t>(a)],
                                             cl.interiors[static_cast<std::size_t>(b)]);
      }
    }
  }
  return BlockCovariance(std::move(tmpl), level, std::move(t_diag), std::move(blocks),
                         std::move(couplings));
}

std::size_t BlockCovariance::size() const { return tmpl_->node_count(level_); }

DenseMatrix BlockCovariance::to_dense() const {
  const std::size_t n = size();
  DenseMatrix m(n, n);
  if (level_ == 0) {
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) m(r, c) = base_(static_cast<int>(r), static_cast<int>(c));
    return m;
  }
  for (std::size_t j = 0; j < t_diag_.size(); ++j) m(j, j) = t_diag_[j];
  const auto clusters = tmpl_->clusters(level_);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Cluster& cl = clusters[c];
    for (int a = 0; a < 3; ++a) {
      const std::size_t ia = cl.interiors[static_cast<std::size_t>(a)];
      const std::size_t ca = cl.corners[static_cast<std::size_t>(a)];
      for (int b = 0; b < 3; ++b) {
        const std::size_t ib = cl.interiors[static_cast<std::size_t>(b)];
        m(ia, ib) = interior_blocks_[c](a, b);
        m(ca, ib) = coupling_blocks_[c](a, b);
        m(ib, ca) = coupling_blocks_[c](a, b);
      }
    }
  }
  for (const FillEntry& f : fill_t_) {
    m(f.row, f.col) += f.value;
    if (f.row != f.col) m(f.col, f.row) += f.value;
  }
  return m;
}

std::vector<double> BlockCovariance::apply(std::span<const double> x) const {
  const std::size_t n = size();
  if (x.size() != n) throw DimensionMismatch("vector length", n, x.size());
  std::vector<double> y(n, 0.0);
  if (level_ == 0) {
    const Vec3 r = base_ * Vec3{x[0], x[1], x[2]};
    std::copy(r.begin(), r.end(), y.begin());
    return y;
  }
  for (std::size_t j = 0; j < t_diag_.size(); ++j) y[j] = t_diag_[j] * x[j];
  const auto clusters = tmpl_->clusters(level_);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Cluster& cl = clusters[c];
    const Vec3 xin{x[cl.interiors[0]], x[cl.interiors[1]], x[cl.interiors[2]]};
    const Vec3 xco{x[cl.corners[0]], x[cl.corners[1]], x[cl.corners[2]]};
    const Vec3 yin = interior_blocks_[c] * xin;
    const Vec3 from_corners = transpose_times(coupling_blocks_[c], xco);
    const Vec3 to_corners = coupling_blocks_[c] * xin;
    for (std::size_t s = 0; s < 3; ++s) {
      y[cl.interiors[s]] += yin[s] + from_corners[s];
      y[cl.corners[s]] += to_corners[s];
    }
  }
  for (const FillEntry& f : fill_t_) {
    y[f.row] += f.value * x[f.col];
    if (f.row != f.col) y[f.col] += f.value * x[f.row];
  }
  return y;
}

double BlockCovariance::quadratic_form(std::span<const double> x) const {
  const auto y = apply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += x[i] * y[i];
  return s;
}

double BlockCovariance::max_diagonal() const {
  double best = 0.0;
  if (level_ == 0) {
    for (int i = 0; i < 3; ++i) best = std::max(best, base_(i, i));
    return best;
  }
  for (double t : t_diag_) best = std::max(best, t);
  for (const Mat3& b : interior_blocks_)
    for (int i = 0; i < 3; ++i) best = std::max(best, b(i, i));
  return best;
}

Partition partition(const HierarchyTemplate& tmpl, int level, std::span<const double> y) {
  if (level < 1) throw LevelOutOfRange(level, 1, tmpl.max_level());
  const std::size_t n = tmpl.node_count(level);
  if (y.size() != n) throw DimensionMismatch("vector length", n, y.size());
  const std::size_t jc = tmpl.junction_count(level);
  return {std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(jc)),
          std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(jc), y.end())};
}

namespace {

// Symmetric sparse working matrix over the top-level index space. Junction
// indices are stable across levels, so one index space serves every level.
struct SparseSym {
  std::vector<double> diag;
  std::vector<std::unordered_map<std::size_t, double>> adj;

  explicit SparseSym(std::size_t n) : diag(n, 0.0), adj(n) {}

  void add(std::size_t i, std::size_t j, double v) {
    if (i == j) {
      diag[i] += v;
      return;
    }
    adj[i][j] += v;
    adj[j][i] += v;
  }

  double get(std::size_t i, std::size_t j) const {
    if (i == j) return diag[i];
    const auto it = adj[i].find(j);
    return it == adj[i].end() ? 0.0 : it->second;
  }
};

// LDL^T of a 3x3 symmetric block; false if a pivot is not above threshold.
struct Ldl3 {
  double l10 = 0, l20 = 0, l21 = 0;
  Vec3 d{};

  bool factor(const Mat3& b, double threshold) {
    d[0] = b(0, 0);
    if (!(d[0] > threshold)) return false;
    l10 = b(1, 0) / d[0];
    l20 = b(2, 0) / d[0];
    d[1] = b(1, 1) - l10 * l10 * d[0];
    if (!(d[1] > threshold)) return false;
    l21 = (b(2, 1) - l20 * l10 * d[0]) / d[1];
    d[2] = b(2, 2) - l20 * l20 * d[0] - l21 * l21 * d[1];
    return d[2] > threshold;
  }

  Vec3 solve(const Vec3& rhs) const {
    Vec3 z{rhs[0], rhs[1] - l10 * rhs[0], 0.0};
    z[2] = rhs[2] - l20 * z[0] - l21 * z[1];
    for (int i = 0; i < 3; ++i) z[static_cast<std::size_t>(i)] /= d[static_cast<std::size_t>(i)];
    Vec3 x{};
    x[2] = z[2];
    x[1] = z[1] - l21 * x[2];
    x[0] = z[0] - l10 * x[1] - l20 * x[2];
    return x;
  }
};

bool eliminate(SparseSym& m, const std::array<std::size_t, 3>& nodes, double threshold) {
  Mat3 b;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      b(r, c) = m.get(nodes[static_cast<std::size_t>(r)], nodes[static_cast<std::size_t>(c)]);
  Ldl3 ldl;
  if (!ldl.factor(b, threshold)) return false;

  std::vector<std::size_t> neighbours;
  for (std::size_t e : nodes)
    for (const auto& [u, v] : m.adj[e])
      if (std::find(nodes.begin(), nodes.end(), u) == nodes.end() &&
          std::find(neighbours.begin(), neighbours.end(), u) == neighbours.end())
        neighbours.push_back(u);
  std::sort(neighbours.begin(), neighbours.end());

  std::vector<Vec3> coupling(neighbours.size());
  std::vector<Vec3> solved(neighbours.size());
  for (std::size_t a = 0; a < neighbours.size(); ++a) {
    for (std::size_t r = 0; r < 3; ++r) coupling[a][r] = m.get(nodes[r], neighbours[a]);
    solved[a] = ldl.solve(coupling[a]);
  }
  for (std::size_t a = 0; a < neighbours.size(); ++a)
    for (std::size_t c = a; c < neighbours.size(); ++c)
      m.add(neighbours[a], neighbours[c], -dot(coupling[a], solved[c]));

  for (std::size_t e : nodes) {
    for (const auto& [u, v] : m.adj[e]) m.adj[u].erase(e);
    m.adj[e].clear();
  }
  return true;
}

}  // namespace

bool is_positive_definite(const BlockCovariance& cov, double pd_tol) {
  const double threshold = pd_tol * cov.max_diagonal();
  const HierarchyTemplate& tmpl = cov.hierarchy();
  const int top = cov.level();

  if (top == 0) {
    Ldl3 ldl;
    return ldl.factor(cov.base(), threshold);
  }
  SparseSym m(cov.size());
  for (std::size_t j = 0; j < cov.t_diag().size(); ++j) m.diag[j] = cov.t_diag()[j];
  const auto clusters = tmpl.clusters(top);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Cluster& cl = clusters[c];
    for (std::size_t a = 0; a < 3; ++a) {
      m.diag[cl.interiors[a]] = cov.interior_blocks()[c](static_cast<int>(a), static_cast<int>(a));
      for (std::size_t b = a + 1; b < 3; ++b) {
        const double v = cov.interior_blocks()[c](static_cast<int>(a), static_cast<int>(b));
        if (v != 0.0) m.add(cl.interiors[a], cl.interiors[b], v);
      }
      for (std::size_t r = 0; r < 3; ++r) {
        const double v = cov.coupling_blocks()[c](static_cast<int>(r), static_cast<int>(a));
        if (v != 0.0) m.add(cl.corners[r], cl.interiors[a], v);
      }
    }
  }
  for (const FillEntry& f : cov.fill_t())
    if (f.value != 0.0) m.add(f.row, f.col, f.value);

  for (int k = top; k >= 1; --k)
    for (const Cluster& cl : tmpl.clusters(k))
      if (!eliminate(m, cl.interiors, threshold)) return false;
  return eliminate(m, {0, 1, 2}, threshold);
}

void validate_structure(const BlockCovariance& cov, const ValidationConfig& config) {
  if (cov.level() == 0) {
    for (int i = 0; i < 3; ++i)
      if (!(cov.base()(i, i) > 0.0)) throw NonPositiveDiagonal(static_cast<std::size_t>(i), cov.base()(i, i));
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (cov.base()(i, j) != cov.base()(j, i))
          throw NotSymmetric(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return;
  }
  const HierarchyTemplate& tmpl = cov.hierarchy();
  for (std::size_t j = 0; j < cov.t_diag().size(); ++j)
    if (!(cov.t_diag()[j] > 0.0)) throw NonPositiveDiagonal(j, cov.t_diag()[j]);
  for (const FillEntry& f : cov.fill_t())
    if (std::abs(f.value) > config.zero_tol) throw FillOutsideMask(cov.level(), f.row, f.col);

  const auto clusters = tmpl.clusters(cov.level());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Cluster& cl = clusters[c];
    const Mat3& b = cov.interior_blocks()[c];
    const Mat3& jc = cov.coupling_blocks()[c];
    for (int a = 0; a < 3; ++a) {
      const auto ia = cl.interiors[static_cast<std::size_t>(a)];
      if (!(b(a, a) > 0.0)) throw NonPositiveDiagonal(ia, b(a, a));
      for (int q = a + 1; q < 3; ++q)
        if (b(a, q) != b(q, a)) throw NotSymmetric(ia, cl.interiors[static_cast<std::size_t>(q)]);
      if (!config.strict_mask) continue;
      for (int r = 0; r < 3; ++r) {
        const auto corner = cl.corners[static_cast<std::size_t>(r)];
        if (std::abs(jc(r, a)) > config.zero_tol && !tmpl.permitted(cov.level(), corner, ia, true))
          throw SparsityViolation(corner, ia, jc(r, a));
      }
    }
  }
}

}  // namespace hmvp
