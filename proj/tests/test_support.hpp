#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "hmvp/block_covariance.hpp"
#include "hmvp/dense_matrix.hpp"
#include "hmvp/generator.hpp"

namespace hmvp::testing {

// Reference values for the 15-asset example, computed independently by
// tests/oracle/worked_example.py (exact rationals and numpy dense solves).
inline const std::vector<double> kGamma1 = {1.19060773480663,   0.8708133971291866,
                                            1.43656207366985,   1.4587750138782414,
                                            0.9763064074830599, 1.0603797724498523};
inline const std::vector<double> kGamma0 = {0.5233041927885176, 1.023429084836971,
                                            1.4109544121505562};
inline const double kSigma0[3][3] = {
    {5.0612168797453805, 0.21512232785830923, 0.0026676847867924823},
    {0.21512232785830923, 11.591198243243598, -0.0036242792163365045},
    {0.002667684786792482, -0.0036242792163365045, 5.848282421706893}};
inline const std::vector<double> kW0 = {0.09959028204831445, 0.0865207713997095,
                                        0.24126781341246695};
inline const std::vector<double> kW1Interior = {0.39258627033831106, 0.078394115446036,
                                                0.15964992624775398};
inline const std::vector<double> kW2Interior = {
    -0.10095600855393305, 0.19521986885386436, 0.20806242765774016,
    0.25953835009513576,  0.28283240393351905, 0.21794834069639465,
    0.07439590650508603,  0.18602850145994715, 0.10039885696211688};
inline constexpr double kNormalizer = 2.481477826502463;
inline constexpr double kTotalVariance = 0.40298566818525927;
inline constexpr double kJunctionTerm = 0.22070363310367788;
inline constexpr double kConstantTerm = 0.18228203508158142;

// Exact S(Sigma_2) as numerator/denominator pairs.
struct Rational {
  long long num;
  long long den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};
inline const Rational kSchurSigma2[6][6] = {
    {{1051, 181}, {0, 1}, {0, 1}, {288, 181}, {-57, 362}, {0, 1}},
    {{0, 1}, {2438, 209}, {0, 1}, {-195, 418}, {0, 1}, {117, 418}},
    {{0, 1}, {0, 1}, {4289, 733}, {0, 1}, {110, 733}, {60, 733}},
    {{288, 181}, {-195, 418}, {0, 1}, {518273, 151316}, {38, 181}, {-107, 836}},
    {{-57, 362}, {0, 1}, {110, 733}, {38, 181}, {3010675, 265346}, {-74, 733}},
    {{0, 1}, {117, 418}, {60, 733}, {-107, 836}, {-74, 733}, {4124565, 612788}}};

inline double relative_error(double actual, double expected) {
  if (expected == 0.0) return std::abs(actual);
  return std::abs(actual - expected) / std::abs(expected);
}

/// max |a - b| over entries divided by max |b|.
inline double matrix_relative_error(const DenseMatrix& a, const DenseMatrix& b) {
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
      scale = std::max(scale, std::abs(b(i, j)));
    }
  return scale > 0 ? worst / scale : worst;
}

inline BlockCovariance random_instance(int level, std::uint64_t seed, double coupling = 0.3,
                                       bool strict = false) {
  GeneratorConfig cfg;
  cfg.level = level;
  cfg.seed = seed;
  cfg.coupling_scale = coupling;
  cfg.strict_mask = strict;
  return generate(cfg);
}

inline std::shared_ptr<const HierarchyTemplate> make_template(int max_level) {
  return std::make_shared<const HierarchyTemplate>(max_level);
}

}  // namespace hmvp::testing
