#ifndef BOXPROJ_MODELS_HPP
#define BOXPROJ_MODELS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "boxproj/rng.hpp"

namespace boxproj {

/// Two-component spherical Gaussian mixture X = N + a*e*Y with equal priors:
/// N is standard normal in `dim` dimensions, Y is Bernoulli(1/2) and e is a
/// unit direction (the first basis vector unless given).
struct GaussianMixtureSpec {
  int dim;
  double separation;
  std::vector<double> direction;

  GaussianMixtureSpec(int dim_, double separation_);
  GaussianMixtureSpec(int dim_, double separation_, std::vector<double> direction_);
};

/// Axis-aligned box distribution on {0,a_1} x ... x {0,a_D} with a_1 = 1 and
/// a_k^2 = ratio^(k-2) for k >= 2, each axis an independent fair coin.
/// ratio = 1 is the unit hypercube. Ratios outside [1,2] change the
/// qualitative behaviour (the long axis alone then dominates the scatter of
/// all the others combined), so they require the explicit override flag.
struct BoxSpec {
  int dim;
  double ratio;
  std::vector<double> scales;     // a_k
  std::vector<double> scales_sq;  // a_k^2, built as exact cumulative products

  BoxSpec(int dim_, double ratio_, bool allow_ratio_outside_range = false);
};

using ModelSpec = std::variant<GaussianMixtureSpec, BoxSpec>;

int model_dim(const ModelSpec& model);

/// Largest box dimension enumerate_box_vertices accepts (2^24 rows).
inline constexpr int kEnumerationDimCap = 24;

/// Points, one row per sample, plus the latent Bernoulli draws that produced
/// them when the generating model exposes any. label_dim is 0 (no labels),
/// 1 (mixture: the component bit) or dim (box: one bit per axis).
///
/// Box invariant: coords[j][i] == scales[i] * labels[j][i] exactly, so label
/// columns reproduce the coordinates bit for bit.
struct PointSet {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> coords;  // count x dim, row-major
  std::size_t label_dim = 0;
  std::vector<std::uint8_t> labels;  // count x label_dim, row-major
  std::optional<ModelSpec> model;

  double coord(std::size_t point, std::size_t axis0) const {
    return coords[point * dim + axis0];
  }
  std::uint8_t label(std::size_t point, std::size_t col0) const {
    return labels[point * label_dim + col0];
  }
};

/// Scatter decomposition of a binary split. is_cluster holds when the split
/// explains strictly more variance than it leaves behind (between > within).
struct ScatterReport {
  double within = 0.0;
  double between = 0.0;
  double total = 0.0;
  bool is_cluster = false;
};

std::vector<double> box_scales(int dim, double ratio, bool allow_ratio_outside_range = false);

/// All 2^dim vertices in binary-counter order, axis 1 toggling fastest, so
/// row j has labels[j][i] = bit i of j. Order is fixed; serialized output is
/// stable across runs and platforms.
PointSet enumerate_box_vertices(const BoxSpec& spec);

PointSet sample_box(const BoxSpec& spec, std::size_t n, SeedSpec seed);

PointSet sample_gaussian_mixture(const GaussianMixtureSpec& spec, std::size_t n, SeedSpec seed);

/// Population (not sample) scatter of the split on latent axis `axis`,
/// 1-based. The mixture has a single latent axis, 1. For the box, within
/// and between are exact sums of scales_sq terms over 4, so the identity
/// within + between == total is exact whenever the a_k^2 are.
ScatterReport distributional_scatter(const ModelSpec& model, int axis);

/// The box rescaled to unit per-axis variance: BoxSpec(dim, 1).
BoxSpec whiten(const BoxSpec& spec);

}  // namespace boxproj

#endif  // BOXPROJ_MODELS_HPP
