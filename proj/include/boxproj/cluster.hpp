#ifndef BOXPROJ_CLUSTER_HPP
#define BOXPROJ_CLUSTER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "boxproj/models.hpp"
#include "boxproj/projection.hpp"

namespace boxproj {

/// A two-class assignment over a point set; both classes must be non-empty
/// anywhere a scatter is computed from it.
struct BinaryPartition {
  std::vector<std::uint8_t> assignment;  // 0 or 1 per point
  std::size_t count0 = 0;
  std::size_t count1 = 0;

  explicit BinaryPartition(std::vector<std::uint8_t> assignment_);
};

/// Best single-threshold rule found for labeled scalar values, with the
/// analytic optimum attached when the generating model provides one.
struct ThresholdReport {
  double threshold = 0.0;
  double error = 0.0;  // misclassification rate in [0, 1/2]
  std::optional<double> analytic;
};

/// Standard normal CDF, absolute error below 1e-10 everywhere (rational
/// approximations of erfc in three ranges; no error function from libm so
/// results are bit-identical across platforms).
double normal_cdf(double x);

/// Population scatter of `points` under `part`: within is the weighted mean
/// of class variances, between the weighted spread of class means, total the
/// variance around the global mean. Mean-squared distances throughout, so
/// within + between == total up to roundoff.
ScatterReport empirical_scatter(const PointSet& points, const BinaryPartition& part);

/// Bayes error of the best threshold on a unit-direction projection of the
/// two-Gaussian mixture with separation a: Phi(-a*|dot|/2), where dot is the
/// inner product of the projection direction with the mixture direction.
double analytic_min_error(double a, double dot);

/// Exhaustive best single threshold for scalar values with binary labels.
/// Candidate cuts are midpoints of consecutive sorted values; both label
/// polarities are tried; ties pick the smallest threshold. Error is the
/// fraction misclassified, at most 1/2.
ThresholdReport empirical_min_error(std::span<const double> values,
                                    std::span<const std::uint8_t> labels);

/// Whether direction v separates the box's axis `axis` (1-based): the spread
/// the other axes contribute to the projection stays strictly below the step
/// axis `axis` contributes, i.e. sum_{i != axis} (a_i v_i)^2 < (a_axis v_axis)^2.
/// Scale-invariant in v, so raw Gaussian directions work unnormalized.
bool axis_split_condition(std::span<const double> v, std::span<const double> scales, int axis);
bool axis_split_condition(const ProjectionVector& v, std::span<const double> scales, int axis);

/// The axis v separates, if any. At most one axis can win (only the largest
/// term can exceed the sum of all the others), so the result is unique.
std::optional<int> find_separable_axis(std::span<const double> v,
                                       std::span<const double> scales);
std::optional<int> find_separable_axis(const ProjectionVector& v,
                                       std::span<const double> scales);

}  // namespace boxproj

#endif  // BOXPROJ_CLUSTER_HPP
