#include "boxproj/projection.hpp"

#include <cmath>
#include <stdexcept>

namespace boxproj {

namespace {

void check_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("projection dimension must be at least 1");
}

}  // namespace

ProjectionVector random_gaussian_vector(int dim, PhiloxEngine& engine) {
  check_dim(dim);
  ProjectionVector v;
  v.coords.resize(static_cast<std::size_t>(dim));
  engine.fill_normals(v.coords);
  return v;
}

ProjectionVector random_gaussian_vector(int dim, SeedSpec seed) {
  PhiloxEngine eng(seed);
  return random_gaussian_vector(dim, eng);
}

ProjectionVector random_unit_vector(int dim, PhiloxEngine& engine) {
  ProjectionVector v = random_gaussian_vector(dim, engine);
  for (;;) {
    double nsq = 0.0;
    for (double x : v.coords) nsq += x * x;
    const double norm = std::sqrt(nsq);
    if (norm >= 1e-300) {
      for (double& x : v.coords) x /= norm;
      v.normalized = true;
      return v;
    }
    engine.fill_normals(v.coords);  // astronomically rare; redraw
  }
}

ProjectionVector random_unit_vector(int dim, SeedSpec seed) {
  PhiloxEngine eng(seed);
  return random_unit_vector(dim, eng);
}

ProjectionVector axis_direction(int dim, int axis) {
  check_dim(dim);
  if (axis < 1 || axis > dim) throw std::out_of_range("axis_direction: axis out of range");
  ProjectionVector v;
  v.coords.assign(static_cast<std::size_t>(dim), 0.0);
  v.coords[static_cast<std::size_t>(axis - 1)] = 1.0;
  v.normalized = true;
  return v;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> project(const PointSet& points, const ProjectionVector& v) {
  if (v.coords.size() != points.dim)
    throw std::invalid_argument("project: direction length must equal point dimension");
  std::vector<double> out(points.count);
  for (std::size_t j = 0; j < points.count; ++j) {
    const double* row = points.coords.data() + j * points.dim;
    double s = 0.0;
    for (std::size_t i = 0; i < points.dim; ++i) s += row[i] * v.coords[i];
    out[j] = s;
  }
  return out;
}

}  // namespace boxproj
