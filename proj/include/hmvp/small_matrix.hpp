#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>

namespace hmvp {

using Vec3 = std::array<double, 3>;

/// Row-major 3x3 matrix. The base cluster size; every inversion performed by
/// the recursive path goes through invert_symmetric3.
struct Mat3 {
  std::array<double, 9> a{};

  double& operator()(int r, int c) { return a[3 * r + c]; }
  double operator()(int r, int c) const { return a[3 * r + c]; }

  static Mat3 identity() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
  }

  friend bool operator==(const Mat3&, const Mat3&) = default;
};

inline Mat3 transpose(const Mat3& m) {
  Mat3 t;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) t(r, c) = m(c, r);
  return t;
}

inline Mat3 operator*(const Mat3& x, const Mat3& y) {
  Mat3 z;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) z(r, c) = x(r, 0) * y(0, c) + x(r, 1) * y(1, c) + x(r, 2) * y(2, c);
  return z;
}

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
  return {m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2],
          m(1, 0) * v[0] + m(1, 1) * v[1] + m(1, 2) * v[2],
          m(2, 0) * v[0] + m(2, 1) * v[1] + m(2, 2) * v[2]};
}

/// m^T v without forming the transpose.
inline Vec3 transpose_times(const Mat3& m, const Vec3& v) {
  return {m(0, 0) * v[0] + m(1, 0) * v[1] + m(2, 0) * v[2],
          m(0, 1) * v[0] + m(1, 1) * v[1] + m(2, 1) * v[2],
          m(0, 2) * v[0] + m(1, 2) * v[1] + m(2, 2) * v[2]};
}

inline double dot(const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

inline double max_abs_row_sum(const Mat3& m);

/// C * S * C^T for symmetric S, computed on the upper triangle and mirrored
/// so the result is exactly symmetric.
Mat3 congruence(const Mat3& c, const Mat3& s);

/// Closed-form inverse of a symmetric 3x3 via the adjugate. Returns nullopt
/// when |det| <= pd_tol * ||m||_inf^3. Result is exactly symmetric.
std::optional<Mat3> invert_symmetric3(const Mat3& m, double pd_tol);

/// Process-wide counters for instrumented runs.
struct InversionTally {
  std::atomic<std::uint64_t> small{0};  // 3x3 inversions
  std::atomic<std::uint64_t> dense{0};  // dense factorizations of any size

  void reset() {
    small = 0;
    dense = 0;
  }
};

InversionTally& inversion_tally();

inline double max_abs_row_sum(const Mat3& m) {
  double best = 0.0;
  for (int r = 0; r < 3; ++r) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += m(r, c) < 0 ? -m(r, c) : m(r, c);
    best = s > best ? s : best;
  }
  return best;
}

}  // namespace hmvp
