#include "boxproj/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace boxproj {

namespace {

// Rational erfc after Cody's three-range scheme. Coefficients are the
// published double-precision set; accuracy is ~1e-16 relative on erf and
// better than 1e-10 absolute on the normal CDF everywhere.
constexpr double kErfA[5] = {3.16112374387056560e+00, 1.13864154151050156e+02,
                             3.77485237685302021e+02, 3.20937758913846947e+03,
                             1.85777706184603153e-01};
constexpr double kErfB[4] = {2.36012909523441209e+01, 2.44024637934444173e+02,
                             1.28261652607737228e+03, 2.84423683343917062e+03};
constexpr double kErfcC[9] = {5.64188496988670089e-01, 8.88314979438837594e+00,
                              6.61191906371416295e+01, 2.98635138197400131e+02,
                              8.81952221241769090e+02, 1.71204761263407058e+03,
                              2.05107837782607147e+03, 1.23033935479799725e+03,
                              2.15311535474403846e-08};
constexpr double kErfcD[8] = {1.57449261107098347e+01, 1.17693950891312499e+02,
                              5.37181101862009858e+02, 1.62138957456669019e+03,
                              3.29079923573345963e+03, 4.36261909014324716e+03,
                              3.43936767414372164e+03, 1.23033935480374942e+03};
constexpr double kErfcP[6] = {3.05326634961232344e-01, 3.60344899949804439e-01,
                              1.25781726111229246e-01, 1.60837851487422766e-02,
                              6.58749161529837803e-04, 1.63153871373020978e-02};
constexpr double kErfcQ[5] = {2.56852019228982242e+00, 1.87295284992346047e+00,
                              5.27905102951428412e-01, 6.05183413124413191e-02,
                              2.33520497626869185e-03};
constexpr double kInvSqrtPi = 5.6418958354775628695e-01;

// exp(-y*y) with the argument split so the large cancelling part is exact.
inline double exp_neg_square(double y) {
  const double hi = std::trunc(y * 16.0) / 16.0;
  const double del = (y - hi) * (y + hi);
  return std::exp(-hi * hi) * std::exp(-del);
}

// erfc(y) for y >= 0.
double erfc_pos(double y) {
  if (y <= 0.46875) {
    const double z = y * y;
    double num = kErfA[4] * z;
    double den = z;
    for (int i = 0; i < 3; ++i) {
      num = (num + kErfA[i]) * z;
      den = (den + kErfB[i]) * z;
    }
    return 1.0 - y * (num + kErfA[3]) / (den + kErfB[3]);
  }
  if (y <= 4.0) {
    double num = kErfcC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + kErfcC[i]) * y;
      den = (den + kErfcD[i]) * y;
    }
    return exp_neg_square(y) * (num + kErfcC[7]) / (den + kErfcD[7]);
  }
  if (y >= 26.6) return 0.0;  // below the smallest normal double
  const double z = 1.0 / (y * y);
  double num = kErfcP[5] * z;
  double den = z;
  for (int i = 0; i < 4; ++i) {
    num = (num + kErfcP[i]) * z;
    den = (den + kErfcQ[i]) * z;
  }
  const double r = z * (num + kErfcP[4]) / (den + kErfcQ[4]);
  return exp_neg_square(y) * (kInvSqrtPi - r) / y;
}

double erfc_impl(double x) { return x < 0.0 ? 2.0 - erfc_pos(-x) : erfc_pos(x); }

}  // namespace

double normal_cdf(double x) {
  if (std::isnan(x)) throw std::domain_error("normal_cdf: NaN argument");
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  return 0.5 * erfc_impl(-x * 0.70710678118654752440);
}

BinaryPartition::BinaryPartition(std::vector<std::uint8_t> assignment_)
    : assignment(std::move(assignment_)) {
  for (std::uint8_t a : assignment) {
    if (a > 1) throw std::invalid_argument("BinaryPartition: assignments must be 0 or 1");
    if (a == 0)
      ++count0;
    else
      ++count1;
  }
}

ScatterReport empirical_scatter(const PointSet& points, const BinaryPartition& part) {
  const std::size_t n = points.count;
  const std::size_t dim = points.dim;
  if (part.assignment.size() != n)
    throw std::invalid_argument("empirical_scatter: partition length must equal point count");
  if (part.count0 == 0 || part.count1 == 0)
    throw std::invalid_argument("empirical_scatter: degenerate partition (a class is empty)");

  std::vector<double> sum0(dim, 0.0);
  std::vector<double> sum1(dim, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double* row = points.coords.data() + j * dim;
    double* s = part.assignment[j] ? sum1.data() : sum0.data();
    for (std::size_t i = 0; i < dim; ++i) s[i] += row[i];
  }
  std::vector<double> mu0(dim), mu1(dim), mu(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    mu0[i] = sum0[i] / static_cast<double>(part.count0);
    mu1[i] = sum1[i] / static_cast<double>(part.count1);
    mu[i] = (sum0[i] + sum1[i]) / static_cast<double>(n);
  }

  double within = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double* row = points.coords.data() + j * dim;
    const double* m = part.assignment[j] ? mu1.data() : mu0.data();
    for (std::size_t i = 0; i < dim; ++i) {
      const double dw = row[i] - m[i];
      within += dw * dw;
      const double dt = row[i] - mu[i];
      total += dt * dt;
    }
  }
  const auto dn = static_cast<double>(n);
  within /= dn;
  total /= dn;

  double between = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double d0 = mu0[i] - mu[i];
    const double d1 = mu1[i] - mu[i];
    between += static_cast<double>(part.count0) / dn * d0 * d0 +
               static_cast<double>(part.count1) / dn * d1 * d1;
  }

  ScatterReport rep;
  rep.within = within;
  rep.between = between;
  rep.total = total;
  rep.is_cluster = between > within;
  return rep;
}

double analytic_min_error(double a, double dot) {
  if (!std::isfinite(a) || a < 0.0)
    throw std::invalid_argument("analytic_min_error: separation must be finite and non-negative");
  if (!std::isfinite(dot)) throw std::invalid_argument("analytic_min_error: dot must be finite");
  return normal_cdf(-0.5 * a * std::fabs(dot));
}

ThresholdReport empirical_min_error(std::span<const double> values,
                                    std::span<const std::uint8_t> labels) {
  const std::size_t n = values.size();
  if (labels.size() != n)
    throw std::invalid_argument("empirical_min_error: values and labels must align");
  if (n < 2) throw std::invalid_argument("empirical_min_error: need at least two points");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::size_t total_ones = 0;
  for (std::uint8_t l : labels) {
    if (l > 1) throw std::invalid_argument("empirical_min_error: labels must be 0 or 1");
    total_ones += l;
  }
  if (total_ones == 0 || total_ones == n)
    throw std::invalid_argument("empirical_min_error: degenerate labels (single class)");
  const std::size_t total_zeros = n - total_ones;

  std::vector<double> sorted(n);
  std::vector<std::size_t> ones_before(n + 1, 0);  // ones among the first i sorted points
  for (std::size_t i = 0; i < n; ++i) {
    sorted[i] = values[order[i]];
    ones_before[i + 1] = ones_before[i] + labels[order[i]];
  }

  // Classify by (x < t); candidate cuts are midpoints of consecutive sorted
  // values. Cuts walk left to right, so keeping strict improvements picks the
  // smallest threshold among ties. With every value equal, each cut reproduces
  // the one-class rule and the best error is min(n0, n1)/n at that value.
  double best_threshold = sorted[0];
  std::size_t best_miss = std::min(total_zeros, total_ones);
  for (std::size_t i = 1; i < n; ++i) {
    const double t = sorted[i - 1] + (sorted[i] - sorted[i - 1]) / 2.0;
    const auto left = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
    // zeros left of the cut, ones right of it:
    const std::size_t miss_zero_left =
        ones_before[left] + (total_zeros - (left - ones_before[left]));
    const std::size_t miss = std::min(miss_zero_left, n - miss_zero_left);
    if (miss < best_miss) {
      best_miss = miss;
      best_threshold = t;
    }
  }

  ThresholdReport rep;
  rep.threshold = best_threshold;
  rep.error = static_cast<double>(best_miss) / static_cast<double>(n);
  return rep;
}

bool axis_split_condition(std::span<const double> v, std::span<const double> scales, int axis) {
  if (v.size() != scales.size())
    throw std::invalid_argument("axis_split_condition: direction and scales must align");
  if (axis < 1 || static_cast<std::size_t>(axis) > v.size())
    throw std::out_of_range("axis_split_condition: axis out of range");
  const auto k = static_cast<std::size_t>(axis - 1);
  double own = 0.0;
  double rest = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = scales[i] * v[i];
    const double tsq = t * t;
    if (i == k)
      own = tsq;
    else
      rest += tsq;
  }
  return rest < own;
}

bool axis_split_condition(const ProjectionVector& v, std::span<const double> scales, int axis) {
  return axis_split_condition(std::span<const double>(v.coords), scales, axis);
}

std::optional<int> find_separable_axis(std::span<const double> v,
                                       std::span<const double> scales) {
  if (v.size() != scales.size())
    throw std::invalid_argument("find_separable_axis: direction and scales must align");
  if (v.empty()) throw std::invalid_argument("find_separable_axis: empty direction");
  // Only the largest term can beat the sum of the others, so one check
  // suffices; it reuses axis_split_condition for bit-identical semantics.
  std::size_t best = 0;
  double best_term = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = scales[i] * v[i];
    const double tsq = t * t;
    if (tsq > best_term) {
      best_term = tsq;
      best = i;
    }
  }
  const int axis = static_cast<int>(best) + 1;
  if (axis_split_condition(v, scales, axis)) return axis;
  return std::nullopt;
}

std::optional<int> find_separable_axis(const ProjectionVector& v,
                                       std::span<const double> scales) {
  return find_separable_axis(std::span<const double>(v.coords), scales);
}

}  // namespace boxproj
