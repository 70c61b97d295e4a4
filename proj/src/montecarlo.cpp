#include "boxproj/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

namespace boxproj {

namespace {

// Runs body(begin, end) over a partition of [0, total) and sums the returned
// counts. Chunk boundaries depend on the worker count but results never do:
// each trial index draws from its own substream, and per-chunk tallies are
// integers, so the final sum is exact regardless of scheduling.
std::uint64_t parallel_tally(std::uint64_t total,
                             const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& body) {
  unsigned workers = worker_count();
  if (total < 2048) workers = 1;
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, std::max<std::uint64_t>(total, 1)));
  if (workers <= 1) return body(0, total);

  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = total / workers;
  const std::uint64_t rem = total % workers;
  std::uint64_t begin = 0;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t len = chunk + (w < rem ? 1 : 0);
    pool.emplace_back([&, w, b = begin, e = begin + len] { partial[w] = body(b, e); });
    begin += len;
  }
  for (auto& t : pool) t.join();
  std::uint64_t sum = 0;
  for (std::uint64_t p : partial) sum += p;
  return sum;
}

void check_trials(std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
}

EstimateWithCI make_estimate(std::uint64_t successes, std::uint64_t trials) {
  EstimateWithCI est;
  est.trials = trials;
  est.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
  std::tie(est.ci_low, est.ci_high) = wilson_interval(successes, trials);
  return est;
}

}  // namespace

unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("BOXPROJ_THREADS")) {
    unsigned requested = 0;
    const char* end = env + std::string_view(env).size();
    auto [ptr, ec] = std::from_chars(env, end, requested);
    if (ec == std::errc{} && ptr == end && requested >= 1)
      return std::min(requested, 1024u);
  }
  return hw;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  check_trials(trials);
  if (successes > trials)
    throw std::invalid_argument("wilson_interval: successes exceed trials");
  static const double z = inverse_normal_cdf(0.975);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  double lo = (center - half) / denom;
  double hi = (center + half) / denom;
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  // At the extremes the closed form cancels to exactly 0 (or 1); pin the
  // endpoint rather than leave sqrt roundoff above (below) the estimate.
  if (successes == 0) lo = 0.0;
  if (successes == trials) hi = 1.0;
  return {lo, hi};
}

EstimateWithCI estimate_separation_probability(int dim, double ratio, std::uint64_t trials,
                                               SeedSpec seed) {
  check_trials(trials);
  const BoxSpec box(dim, ratio);
  const std::uint64_t hits = parallel_tally(trials, [&](std::uint64_t b, std::uint64_t e) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    std::uint64_t c = 0;
    for (std::uint64_t t = b; t < e; ++t) {
      PhiloxEngine eng(seed, t);
      eng.fill_normals(v);
      if (find_separable_axis(v, box.scales)) ++c;
    }
    return c;
  });
  return make_estimate(hits, trials);
}

SweepTable sweep(const std::vector<double>& r_values, const std::vector<int>& d_values,
                 std::uint64_t trials, std::uint64_t master_seed) {
  if (r_values.empty() || d_values.empty())
    throw std::invalid_argument("sweep: grid must be non-empty");
  check_trials(trials);
  SweepTable table;
  table.r_values = r_values;
  table.d_values = d_values;
  table.trials_per_cell = trials;
  table.master_seed = master_seed;
  table.cells.reserve(r_values.size() * d_values.size());
  for (std::size_t ri = 0; ri < r_values.size(); ++ri) {
    for (std::size_t di = 0; di < d_values.size(); ++di) {
      const std::uint64_t stream = ri * d_values.size() + di;
      table.cells.push_back(estimate_separation_probability(
          d_values[di], r_values[ri], trials, SeedSpec{master_seed, stream}));
    }
  }
  return table;
}

double ks_statistic_vs_normal(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("ks_statistic_vs_normal: no values");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = normal_cdf(values[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("ks_critical_value: n must be positive");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ks_critical_value: alpha must lie in (0,1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

double lemma1_diagnostic(int dim, std::size_t samples, SeedSpec seed) {
  if (dim < 1) throw std::invalid_argument("lemma1_diagnostic: dim must be at least 1");
  if (samples < 100)
    throw std::invalid_argument("lemma1_diagnostic: need at least 100 samples");
  const double scale = std::sqrt(static_cast<double>(dim));
  std::vector<double> vals(samples);
  parallel_tally(samples, [&](std::uint64_t b, std::uint64_t e) -> std::uint64_t {
    for (std::uint64_t i = b; i < e; ++i) {
      PhiloxEngine eng(seed, i);
      const ProjectionVector u = random_unit_vector(dim, eng);
      vals[i] = scale * u.coords[0];
    }
    return 0;
  });
  return ks_statistic_vs_normal(std::move(vals));
}

ErrorDistributionSummary error_distribution_diagnostic(int dim, double a, std::uint64_t trials,
                                                       SeedSpec seed) {
  check_trials(trials);
  if (dim < 1) throw std::invalid_argument("error_distribution_diagnostic: dim must be at least 1");
  if (!std::isfinite(a) || a < 0.0)
    throw std::invalid_argument("error_distribution_diagnostic: separation must be non-negative");
  std::vector<double> errors(trials);
  parallel_tally(trials, [&](std::uint64_t b, std::uint64_t e) -> std::uint64_t {
    for (std::uint64_t t = b; t < e; ++t) {
      PhiloxEngine eng(seed, t);
      const ProjectionVector u = random_unit_vector(dim, eng);
      errors[t] = analytic_min_error(a, u.coords[0]);  // mixture direction e1
    }
    return 0;
  });

  std::sort(errors.begin(), errors.end());
  ErrorDistributionSummary s;
  s.trials = trials;
  const std::size_t n = errors.size();
  s.median = n % 2 ? errors[n / 2] : errors[n / 2 - 1] + (errors[n / 2] - errors[n / 2 - 1]) / 2.0;
  s.frac_below_0_1 =
      static_cast<double>(std::lower_bound(errors.begin(), errors.end(), 0.1) - errors.begin()) /
      static_cast<double>(n);
  s.frac_above_0_4 =
      static_cast<double>(errors.end() - std::upper_bound(errors.begin(), errors.end(), 0.4)) /
      static_cast<double>(n);
  return s;
}

namespace {

// between - within of a bipartition of box points, computed from the latent
// bits: per-axis binary scatters weighted by the exact squared scales. Class
// counts and bit sums are small integers, so axis-split margins come out
// dyadic-exact where the squared scales are.
double box_label_margin(const PointSet& ps, const std::vector<std::uint8_t>& assign,
                        std::size_t n1) {
  const auto& box = std::get<BoxSpec>(*ps.model);
  const std::size_t n = ps.count;
  const std::size_t n0 = n - n1;
  const auto dn = static_cast<double>(n);
  const auto dn0 = static_cast<double>(n0);
  const auto dn1 = static_cast<double>(n1);
  double margin = 0.0;
  for (std::size_t i = 0; i < ps.dim; ++i) {
    std::size_t s0 = 0;
    std::size_t s1 = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint8_t bit = ps.labels[j * ps.dim + i];
      if (assign[j])
        s1 += bit;
      else
        s0 += bit;
    }
    const double mu0 = static_cast<double>(s0) / dn0;
    const double mu1 = static_cast<double>(s1) / dn1;
    const double mu = static_cast<double>(s0 + s1) / dn;
    const double within = (dn0 * mu0 * (1.0 - mu0) + dn1 * mu1 * (1.0 - mu1)) / dn;
    const double between =
        (dn0 * (mu0 - mu) * (mu0 - mu) + dn1 * (mu1 - mu) * (mu1 - mu)) / dn;
    margin += box.scales_sq[i] * (between - within);
  }
  return margin;
}

}  // namespace

std::optional<BinaryPartition> brute_force_cluster_search(const PointSet& points) {
  const std::size_t n = points.count;
  if (n > 16)
    throw std::length_error("brute_force_cluster_search: capped at 16 points (2^15 bipartitions)");
  if (n < 2) return std::nullopt;

  const bool label_space = points.model && std::holds_alternative<BoxSpec>(*points.model) &&
                           points.label_dim == points.dim &&
                           points.labels.size() == n * points.dim;

  std::optional<std::vector<std::uint8_t>> best;
  double best_margin = 0.0;
  std::vector<std::uint8_t> assign(n, 0);
  const std::uint32_t masks = 1u << (n - 1);
  for (std::uint32_t mask = 1; mask < masks; ++mask) {
    std::size_t n1 = 0;
    for (std::size_t j = 1; j < n; ++j) {
      assign[j] = static_cast<std::uint8_t>((mask >> (j - 1)) & 1u);
      n1 += assign[j];
    }
    double margin;
    if (label_space) {
      margin = box_label_margin(points, assign, n1);
    } else {
      const ScatterReport rep = empirical_scatter(points, BinaryPartition(assign));
      margin = rep.is_cluster ? rep.between - rep.within : 0.0;
      if (!rep.is_cluster) continue;
    }
    if (margin > best_margin) {
      best_margin = margin;
      best = assign;
    }
  }
  if (!best) return std::nullopt;
  return BinaryPartition(std::move(*best));
}

std::pair<EstimateWithCI, EstimateWithCI> whitening_comparison(int dim, double ratio,
                                                               std::uint64_t trials,
                                                               SeedSpec seed) {
  check_trials(trials);
  const BoxSpec box(dim, ratio);
  const BoxSpec flat = whiten(box);
  auto run = [&](const std::vector<double>& scales) {
    return parallel_tally(trials, [&](std::uint64_t b, std::uint64_t e) {
      std::vector<double> v(static_cast<std::size_t>(dim));
      std::uint64_t c = 0;
      for (std::uint64_t t = b; t < e; ++t) {
        PhiloxEngine eng(seed, t);  // same substream both passes: matched draws
        eng.fill_normals(v);
        if (find_separable_axis(v, scales)) ++c;
      }
      return c;
    });
  };
  return {make_estimate(run(box.scales), trials), make_estimate(run(flat.scales), trials)};
}

}  // namespace boxproj
