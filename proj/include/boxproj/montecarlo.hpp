#ifndef BOXPROJ_MONTECARLO_HPP
#define BOXPROJ_MONTECARLO_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "boxproj/cluster.hpp"
#include "boxproj/models.hpp"
#include "boxproj/rng.hpp"

namespace boxproj {

/// Point estimate with a 95% Wilson score interval.
struct EstimateWithCI {
  double p_hat = 0.0;
  std::uint64_t trials = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// 95% Wilson score interval for `successes` out of `trials`, clamped to [0,1].
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// Separation-probability estimates over a (ratio, dim) grid, cells stored
/// ratio-major (all dims for r_values[0] first). Cell (ri, di) uses the
/// independent stream SeedSpec{master_seed, ri * d_values.size() + di}.
struct SweepTable {
  std::vector<double> r_values;
  std::vector<int> d_values;
  std::vector<EstimateWithCI> cells;
  std::uint64_t trials_per_cell = 0;
  std::uint64_t master_seed = 0;

  const EstimateWithCI& cell(std::size_t ri, std::size_t di) const {
    return cells[ri * d_values.size() + di];
  }
};

/// Number of worker threads Monte Carlo loops may use: hardware concurrency,
/// capped by the BOXPROJ_THREADS environment variable when set. Threading
/// only changes speed; every estimate is a deterministic function of its
/// seed because trial t always draws from substream t.
unsigned worker_count();

/// P(a Gaussian direction separates some axis of the box) by Monte Carlo:
/// `trials` independent directions, trial t drawn from substream t of `seed`.
EstimateWithCI estimate_separation_probability(int dim, double ratio, std::uint64_t trials,
                                               SeedSpec seed);

SweepTable sweep(const std::vector<double>& r_values, const std::vector<int>& d_values,
                 std::uint64_t trials, std::uint64_t master_seed);

/// Two-sided Kolmogorov-Smirnov distance of `values` from the standard
/// normal CDF.
double ks_statistic_vs_normal(std::vector<double> values);

/// Large-sample two-sided KS critical value sqrt(-ln(alpha/2)/2) / sqrt(n).
double ks_critical_value(std::size_t n, double alpha);

/// KS distance of sqrt(dim) * (u . e1) from standard normal, where u are
/// `samples` independent uniform unit vectors (substream i of `seed`). Small
/// for large dim; order ~0.34 at dim = 1 where the projection is just +-1.
double lemma1_diagnostic(int dim, std::size_t samples, SeedSpec seed);

/// Shape summary of the distribution of the best threshold error E =
/// Phi(-a|v.e|/2) over random unit directions v.
struct ErrorDistributionSummary {
  double median = 0.0;
  double frac_below_0_1 = 0.0;  // mass near zero error (projection found the gap)
  double frac_above_0_4 = 0.0;  // mass near coin-flip error
  std::uint64_t trials = 0;
};

ErrorDistributionSummary error_distribution_diagnostic(int dim, double a, std::uint64_t trials,
                                                       SeedSpec seed);

/// Exhaustive scatter scan over all bipartitions of at most 16 points
/// (point 0 pinned to class 0). Returns the bipartition maximizing
/// between - within if any has between > within, otherwise nullopt.
///
/// Box-model inputs with full labels are evaluated in label space, where
/// coordinates are scales[i] * bit exactly: per-axis binary scatters combine
/// with the exact squared scales, so verdicts at the ratio = 2 boundary are
/// not corrupted by the 1-ulp error of squaring fl(sqrt(2)).
std::optional<BinaryPartition> brute_force_cluster_search(const PointSet& points);

/// Separation probability of the box against its whitened (unit cube)
/// counterpart, matched trial by trial: trial t tests one direction draw
/// against both scale vectors.
std::pair<EstimateWithCI, EstimateWithCI> whitening_comparison(int dim, double ratio,
                                                               std::uint64_t trials,
                                                               SeedSpec seed);

}  // namespace boxproj

#endif  // BOXPROJ_MONTECARLO_HPP
