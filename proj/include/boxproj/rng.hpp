#ifndef BOXPROJ_RNG_HPP
#define BOXPROJ_RNG_HPP

#include <array>
#include <cstdint>
#include <span>

namespace boxproj {

// Recorded in run manifests so that archived outputs name the exact bit
// stream and variate algorithm they were produced with.
inline constexpr const char* kGeneratorId = "philox4x64-10+inverse-cdf-normal";

/// Address of one independent random stream. Distinct (master_seed,
/// stream_index) pairs map to distinct generator keys, so streams never
/// overlap regardless of how much either one is consumed.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Counter-based generator: Philox 4x64 with 10 rounds.
///
/// The seed forms the 128-bit key; `substream` offsets the third counter
/// word, giving every seed 2^64 disjoint substreams of 2^128 blocks each.
/// Construction costs nothing, so Monte Carlo loops create one engine per
/// trial and results stay independent of trial scheduling.
class PhiloxEngine {
 public:
  explicit PhiloxEngine(SeedSpec seed, std::uint64_t substream = 0);

  std::uint64_t next_u64();

  /// Uniform on (0,1): the 2^53 grid offset by half a step, never 0 or 1.
  double next_uniform();

  /// Standard normal via the inverse CDF (platform-independent).
  double next_normal();

  void fill_normals(std::span<double> out);

 private:
  void advance_block();

  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> block_{};
  unsigned cursor_ = 4;
};

/// Inverse standard normal CDF for p in (0,1), accurate to ~1e-15 relative
/// (Wichura's PPND16 rational scheme). Throws std::domain_error outside (0,1).
double inverse_normal_cdf(double p);

}  // namespace boxproj

#endif  // BOXPROJ_RNG_HPP
