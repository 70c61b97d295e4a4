#include "boxproj/models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace boxproj {

namespace {

void check_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("model dimension must be at least 1");
}

std::vector<double> unit_axis(int dim, int axis0) {
  std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
  e[static_cast<std::size_t>(axis0)] = 1.0;
  return e;
}

}  // namespace

GaussianMixtureSpec::GaussianMixtureSpec(int dim_, double separation_)
    : GaussianMixtureSpec(dim_, separation_, unit_axis(std::max(dim_, 1), 0)) {}

GaussianMixtureSpec::GaussianMixtureSpec(int dim_, double separation_,
                                         std::vector<double> direction_)
    : dim(dim_), separation(separation_), direction(std::move(direction_)) {
  check_dim(dim);
  if (!(separation >= 0.0) || !std::isfinite(separation))
    throw std::invalid_argument("mixture separation must be finite and non-negative");
  if (direction.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("mixture direction length must equal dim");
  double nsq = 0.0;
  for (double x : direction) {
    if (!std::isfinite(x)) throw std::invalid_argument("mixture direction must be finite");
    nsq += x * x;
  }
  if (std::fabs(std::sqrt(nsq) - 1.0) > 1e-12)
    throw std::invalid_argument("mixture direction must be a unit vector");
}

BoxSpec::BoxSpec(int dim_, double ratio_, bool allow_ratio_outside_range)
    : dim(dim_), ratio(ratio_) {
  check_dim(dim);
  if (!std::isfinite(ratio) || ratio <= 0.0)
    throw std::invalid_argument("box ratio must be finite and positive");
  if (!allow_ratio_outside_range && (ratio < 1.0 || ratio > 2.0))
    throw std::out_of_range(
        "box ratio outside [1,2]: above 2 the longest axis outweighs all the "
        "others combined and its split becomes a cluster; pass the override "
        "flag to build such a box anyway");
  scales.resize(static_cast<std::size_t>(dim));
  scales_sq.resize(static_cast<std::size_t>(dim));
  // a_1 = a_2 = 1; beyond that a_k^2 = ratio^(k-2) built multiplicatively so
  // integer ratios give exact powers.
  double sq = 1.0;
  for (int k = 1; k <= dim; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    if (k > 2) sq *= ratio;
    scales_sq[i] = sq;
    scales[i] = k <= 2 ? 1.0 : std::pow(ratio, (k - 2) / 2.0);
  }
}

int model_dim(const ModelSpec& model) {
  return std::visit([](const auto& m) { return m.dim; }, model);
}

std::vector<double> box_scales(int dim, double ratio, bool allow_ratio_outside_range) {
  return BoxSpec(dim, ratio, allow_ratio_outside_range).scales;
}

PointSet enumerate_box_vertices(const BoxSpec& spec) {
  if (spec.dim > kEnumerationDimCap)
    throw std::length_error("enumerate_box_vertices: dim exceeds the 2^24-row cap");
  const auto dim = static_cast<std::size_t>(spec.dim);
  const std::size_t n = std::size_t{1} << spec.dim;
  PointSet ps;
  ps.count = n;
  ps.dim = dim;
  ps.label_dim = dim;
  ps.coords.resize(n * dim);
  ps.labels.resize(n * dim);
  ps.model = spec;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      const auto bit = static_cast<std::uint8_t>((j >> i) & 1u);
      ps.labels[j * dim + i] = bit;
      ps.coords[j * dim + i] = bit ? spec.scales[i] : 0.0;
    }
  }
  return ps;
}

PointSet sample_box(const BoxSpec& spec, std::size_t n, SeedSpec seed) {
  if (n == 0) throw std::invalid_argument("sample_box: need at least one point");
  const auto dim = static_cast<std::size_t>(spec.dim);
  PointSet ps;
  ps.count = n;
  ps.dim = dim;
  ps.label_dim = dim;
  ps.coords.resize(n * dim);
  ps.labels.resize(n * dim);
  ps.model = spec;
  PhiloxEngine eng(seed);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      const auto bit = static_cast<std::uint8_t>(eng.next_u64() >> 63);
      ps.labels[j * dim + i] = bit;
      ps.coords[j * dim + i] = bit ? spec.scales[i] : 0.0;
    }
  }
  return ps;
}

PointSet sample_gaussian_mixture(const GaussianMixtureSpec& spec, std::size_t n, SeedSpec seed) {
  if (n == 0) throw std::invalid_argument("sample_gaussian_mixture: need at least one point");
  const auto dim = static_cast<std::size_t>(spec.dim);
  PointSet ps;
  ps.count = n;
  ps.dim = dim;
  ps.label_dim = 1;
  ps.coords.resize(n * dim);
  ps.labels.resize(n);
  ps.model = spec;
  PhiloxEngine eng(seed);
  for (std::size_t j = 0; j < n; ++j) {
    const auto bit = static_cast<std::uint8_t>(eng.next_u64() >> 63);
    ps.labels[j] = bit;
    for (std::size_t i = 0; i < dim; ++i) {
      double x = eng.next_normal();
      if (bit) x += spec.separation * spec.direction[i];
      ps.coords[j * dim + i] = x;
    }
  }
  return ps;
}

ScatterReport distributional_scatter(const ModelSpec& model, int axis) {
  ScatterReport rep;
  if (const auto* mix = std::get_if<GaussianMixtureSpec>(&model)) {
    if (axis != 1)
      throw std::out_of_range("distributional_scatter: the mixture has a single latent axis, 1");
    rep.within = static_cast<double>(mix->dim);
    rep.between = mix->separation * mix->separation / 4.0;
  } else {
    const auto& box = std::get<BoxSpec>(model);
    if (axis < 1 || axis > box.dim)
      throw std::out_of_range("distributional_scatter: axis out of range");
    double within = 0.0;
    for (int k = 1; k <= box.dim; ++k) {
      if (k == axis) continue;
      within += box.scales_sq[static_cast<std::size_t>(k - 1)] / 4.0;
    }
    rep.within = within;
    rep.between = box.scales_sq[static_cast<std::size_t>(axis - 1)] / 4.0;
  }
  rep.total = rep.within + rep.between;
  rep.is_cluster = rep.between > rep.within;
  return rep;
}

BoxSpec whiten(const BoxSpec& spec) { return BoxSpec(spec.dim, 1.0); }

}  // namespace boxproj
