#ifndef BOXPROJ_PROJECTION_HPP
#define BOXPROJ_PROJECTION_HPP

#include <span>
#include <vector>

#include "boxproj/models.hpp"
#include "boxproj/rng.hpp"

namespace boxproj {

/// A direction used for 1-D projection. `normalized` records whether the
/// coordinates were scaled to unit length; the axis-split separation test is
/// scale-invariant, so raw Gaussian directions are fine there, but threshold
/// errors compare against analytic values that assume unit length.
struct ProjectionVector {
  std::vector<double> coords;
  bool normalized = false;
};

/// i.i.d. standard normal coordinates, one engine per call via `seed`.
ProjectionVector random_gaussian_vector(int dim, SeedSpec seed);
ProjectionVector random_gaussian_vector(int dim, PhiloxEngine& engine);

/// Gaussian direction scaled to unit length. Draws whose norm underflows
/// (below 1e-300) are rejected and redrawn from the same stream.
ProjectionVector random_unit_vector(int dim, SeedSpec seed);
ProjectionVector random_unit_vector(int dim, PhiloxEngine& engine);

/// The basis vector along `axis` (1-based).
ProjectionVector axis_direction(int dim, int axis);

double dot(std::span<const double> a, std::span<const double> b);

/// Inner products of every point with v: one scalar per row.
std::vector<double> project(const PointSet& points, const ProjectionVector& v);

}  // namespace boxproj

#endif  // BOXPROJ_PROJECTION_HPP
