#include "boxproj/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace boxproj {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
  const auto prod = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(prod >> 64);
  return static_cast<std::uint64_t>(prod);
}

}  // namespace

PhiloxEngine::PhiloxEngine(SeedSpec seed, std::uint64_t substream)
    : counter_{0, 0, substream, 0}, key_{seed.master_seed, seed.stream_index} {}

void PhiloxEngine::advance_block() {
  // The counter steps before the block is produced, so the first block of a
  // fresh engine is evaluated at counter word0 = 1 (numpy Philox convention;
  // golden vectors are reproducible with numpy.random.Philox).
  for (int i = 0; i < 4; ++i) {
    if (++counter_[static_cast<std::size_t>(i)] != 0) break;
  }
  std::array<std::uint64_t, 4> c = counter_;
  std::array<std::uint64_t, 2> k = key_;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0 = 0;
    std::uint64_t hi1 = 0;
    const std::uint64_t lo0 = mulhilo(kMult0, c[0], hi0);
    const std::uint64_t lo1 = mulhilo(kMult1, c[2], hi1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  block_ = c;
  cursor_ = 0;
}

std::uint64_t PhiloxEngine::next_u64() {
  if (cursor_ == 4) advance_block();
  return block_[cursor_++];
}

double PhiloxEngine::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double PhiloxEngine::next_normal() { return inverse_normal_cdf(next_uniform()); }

void PhiloxEngine::fill_normals(std::span<double> out) {
  for (double& x : out) x = next_normal();
}

namespace {

// Wichura's PPND16 coefficients, central then two tail regions.
constexpr double kA[8] = {3.3871328727963666080e+00, 1.3314166789178437745e+02,
                          1.9715909503065514427e+03, 1.3731693765509461125e+04,
                          4.5921953931549871457e+04, 6.7265770927008700853e+04,
                          3.3430575583588128105e+04, 2.5090809287301226727e+03};
constexpr double kB[8] = {1.0, 4.2313330701600911252e+01, 6.8718700749205790830e+02,
                          5.3941960214247511077e+03, 2.1213794301586595867e+04,
                          3.9307895800092710610e+04, 2.8729085735721942674e+04,
                          5.2264952788528545610e+03};
constexpr double kC[8] = {1.42343711074968357734e+00, 4.63033784615654529590e+00,
                          5.76949722146069140550e+00, 3.64784832476320460504e+00,
                          1.27045825245236838258e+00, 2.41780725177450611770e-01,
                          2.27238449892691845833e-02, 7.74545014278341407640e-04};
constexpr double kD[8] = {1.0, 2.05319162663775882187e+00, 1.67638483018380384940e+00,
                          6.89767334985100004550e-01, 1.48103976427480074590e-01,
                          1.51986665636164571966e-02, 5.47593808499534494600e-04,
                          1.05075007164441684324e-09};
constexpr double kE[8] = {6.65790464350110377720e+00, 5.46378491116411436990e+00,
                          1.78482653991729133580e+00, 2.96560571828504891230e-01,
                          2.65321895265761230930e-02, 1.24266094738807843860e-03,
                          2.71155556874348757815e-05, 2.01033439929228813265e-07};
constexpr double kF[8] = {1.0, 5.99832206555887937690e-01, 1.36929880922735805310e-01,
                          1.48753612908506148525e-02, 7.86869131145613259100e-04,
                          1.84631831751005468180e-05, 1.42151175831644588870e-07,
                          2.04426310338993978564e-15};

inline double poly_ratio(const double (&num)[8], const double (&den)[8], double x) {
  double p = num[7];
  double q = den[7];
  for (int i = 6; i >= 0; --i) {
    p = p * x + num[i];
    q = q * x + den[i];
  }
  return p / q;
}

}  // namespace

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("inverse_normal_cdf: p must lie strictly inside (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly_ratio(kA, kB, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    x = poly_ratio(kC, kD, r - 1.6);
  } else {
    x = poly_ratio(kE, kF, r - 5.0);
  }
  return q < 0.0 ? -x : x;
}

}  // namespace boxproj
