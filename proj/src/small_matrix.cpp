#include "hmvp/small_matrix.hpp"

#include <cmath>

namespace hmvp {

InversionTally& inversion_tally() {
  static InversionTally tally;
  return tally;
}

Mat3 congruence(const Mat3& c, const Mat3& s) {
  const Mat3 cs = c * s;
  Mat3 out;
  for (int r = 0; r < 3; ++r) {
    for (int q = r; q < 3; ++q) {
      const double v = cs(r, 0) * c(q, 0) + cs(r, 1) * c(q, 1) + cs(r, 2) * c(q, 2);
      out(r, q) = v;
      out(q, r) = v;
    }
  }
  return out;
}

std::optional<Mat3> invert_symmetric3(const Mat3& m, double pd_tol) {
  inversion_tally().small.fetch_add(1, std::memory_order_relaxed);

  const double c00 = m(1, 1) * m(2, 2) - m(1, 2) * m(1, 2);
  const double c01 = m(0, 2) * m(1, 2) - m(0, 1) * m(2, 2);
  const double c02 = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  const double c11 = m(0, 0) * m(2, 2) - m(0, 2) * m(0, 2);
  const double c12 = m(0, 1) * m(0, 2) - m(0, 0) * m(1, 2);
  const double c22 = m(0, 0) * m(1, 1) - m(0, 1) * m(0, 1);

  const double det = m(0, 0) * c00 + m(0, 1) * c01 + m(0, 2) * c02;
  const double norm = max_abs_row_sum(m);
  if (!std::isfinite(det) || std::abs(det) <= pd_tol * norm * norm * norm) return std::nullopt;

  const double inv = 1.0 / det;
  Mat3 r;
  r(0, 0) = c00 * inv;
  r(1, 1) = c11 * inv;
  r(2, 2) = c22 * inv;
  r(0, 1) = r(1, 0) = c01 * inv;
  r(0, 2) = r(2, 0) = c02 * inv;
  r(1, 2) = r(2, 1) = c12 * inv;
  return r;
}

}  // namespace hmvp
