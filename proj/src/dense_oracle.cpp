#include "hmvp/dense_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hmvp/error.hpp"
#include "hmvp/small_matrix.hpp"

namespace hmvp::oracle {

namespace {

constexpr std::size_t kPanel = 64;

// Symmetric interchange of rows/columns k < p, touching only the lower
// triangle (already-computed L columns included).
void symmetric_swap(DenseMatrix& a, std::size_t k, std::size_t p) {
  if (k == p) return;
  const std::size_t n = a.rows();
  std::swap(a(k, k), a(p, p));
  for (std::size_t j = 0; j < k; ++j) std::swap(a(k, j), a(p, j));
  for (std::size_t i = k + 1; i < p; ++i) std::swap(a(i, k), a(p, i));
  for (std::size_t i = p + 1; i < n; ++i) std::swap(a(i, k), a(i, p));
}

}  // namespace

Ldlt ldlt_factor(const DenseMatrix& input, double pd_tol) {
  if (!input.square()) throw DimensionMismatch("square matrix", input.rows(), input.cols());
  inversion_tally().dense.fetch_add(1, std::memory_order_relaxed);

  const std::size_t n = input.rows();
  Ldlt f{std::vector<std::size_t>(n), input, std::vector<double>(n)};
  DenseMatrix& a = f.lower;
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
  const double threshold = pd_tol * max_diag;

  // Fully updated diagonal, used to choose pivots ahead of the lazy panel
  // updates.
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);

  std::vector<double> scaled(kPanel);
  std::vector<double> panel_t;  // panel transposed: panel_t[p * n + j] = L(j, kb + p)

  for (std::size_t kb = 0; kb < n; kb += kPanel) {
    const std::size_t ke = std::min(n, kb + kPanel);

    for (std::size_t k = kb; k < ke; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (diag[i] > diag[p]) p = i;
      symmetric_swap(a, k, p);
      std::swap(diag[k], diag[p]);
      std::swap(f.perm[k], f.perm[p]);

      const double d = diag[k];
      if (!(d > threshold)) throw NotPositiveDefinite("pivot " + std::to_string(k));
      f.pivots[k] = d;

      for (std::size_t q = kb; q < k; ++q) scaled[q - kb] = a(k, q) * f.pivots[q];
      for (std::size_t i = k + 1; i < n; ++i) {
        double v = a(i, k);
        const auto row = a.row(i);
        for (std::size_t q = kb; q < k; ++q) v -= row[q] * scaled[q - kb];
        const double l = v / d;
        a(i, k) = l;
        diag[i] -= l * v;
      }
    }

    // Trailing update A22 -= L21 D L21^T on the lower triangle.
    if (ke >= n) break;
    const std::size_t width = ke - kb;
    panel_t.assign(width * n, 0.0);
    for (std::size_t j = ke; j < n; ++j)
      for (std::size_t q = 0; q < width; ++q) panel_t[q * n + j] = a(j, kb + q);

    for (std::size_t i = ke; i < n; ++i) {
      const auto row = a.row(i);
      double* target = row.data();
      for (std::size_t q = 0; q < width; ++q) {
        const double s = row[kb + q] * f.pivots[kb + q];
        const double* src = panel_t.data() + q * n;
        for (std::size_t j = ke; j <= i; ++j) target[j] -= s * src[j];
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
  }
  return f;
}

std::vector<double> ldlt_solve(const Ldlt& f, std::span<const double> b) {
  const std::size_t n = f.pivots.size();
  if (b.size() != n) throw DimensionMismatch("right-hand side", n, b.size());
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = b[f.perm[i]];
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = f.lower.row(i);
    double v = z[i];
    for (std::size_t j = 0; j < i; ++j) v -= row[j] * z[j];
    z[i] = v;
  }
  for (std::size_t i = 0; i < n; ++i) z[i] /= f.pivots[i];
  for (std::size_t i = n; i-- > 0;) {
    const double v = z[i];
    const auto row = f.lower.row(i);
    for (std::size_t j = 0; j < i; ++j) z[j] -= row[j] * v;
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[f.perm[i]] = z[i];
  return x;
}

DenseMatrix ldlt_reconstruct(const Ldlt& f) {
  const std::size_t n = f.pivots.size();
  DenseMatrix pa(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t q = 0; q <= j; ++q) s += f.lower(i, q) * f.pivots[q] * f.lower(j, q);
      pa(i, j) = s;
      pa(j, i) = s;
    }
  }
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(f.perm[i], f.perm[j]) = pa(i, j);
  return out;
}

OracleResult dense_min_variance(const DenseMatrix& sigma, double pd_tol) {
  const Ldlt f = ldlt_factor(sigma, pd_tol);
  const std::vector<double> ones(sigma.rows(), 1.0);
  std::vector<double> x = ldlt_solve(f, ones);
  double total = 0.0;
  for (double v : x) total += v;

  OracleResult r;
  for (double& v : x) v /= total;
  r.weights = std::move(x);
  r.total_variance = 1.0 / total;
  const auto [lo, hi] = std::minmax_element(f.pivots.begin(), f.pivots.end());
  r.condition_estimate = *hi / *lo;
  return r;
}

DenseMatrix dense_schur(const DenseMatrix& sigma, std::size_t junction_size, double pd_tol) {
  if (!sigma.square()) throw DimensionMismatch("square matrix", sigma.rows(), sigma.cols());
  const std::size_t n = sigma.rows();
  if (junction_size > n) throw DimensionMismatch("junction size", n, junction_size);
  const std::size_t m = n - junction_size;

  DenseMatrix x(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) x(i, j) = sigma(junction_size + i, junction_size + j);

  Ldlt f;
  try {
    f = ldlt_factor(x, pd_tol);
  } catch (const NotPositiveDefinite&) {
    throw SingularTrailingBlock();
  }

  DenseMatrix s(junction_size, junction_size);
  std::vector<double> column(m);
  for (std::size_t c = 0; c < junction_size; ++c) {
    for (std::size_t i = 0; i < m; ++i) column[i] = sigma(junction_size + i, c);
    const auto z = ldlt_solve(f, column);
    for (std::size_t r = 0; r < junction_size; ++r) {
      double v = 0.0;
      for (std::size_t i = 0; i < m; ++i) v += sigma(junction_size + i, r) * z[i];
      s(r, c) = sigma(r, c) - v;
    }
  }
  for (std::size_t r = 0; r < junction_size; ++r) {
    for (std::size_t c = r + 1; c < junction_size; ++c) {
      const double v = 0.5 * (s(r, c) + s(c, r));
      s(r, c) = v;
      s(c, r) = v;
    }
  }
  return s;
}

DenseMatrix dense_inverse(const DenseMatrix& a, double pd_tol) {
  const Ldlt f = ldlt_factor(a, pd_tol);
  const std::size_t n = a.rows();
  DenseMatrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    e[c] = 1.0;
    const auto col = ldlt_solve(f, e);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
    e[c] = 0.0;
  }
  return inv;
}

}  // namespace hmvp::oracle
