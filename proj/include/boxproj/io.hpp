#ifndef BOXPROJ_IO_HPP
#define BOXPROJ_IO_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "boxproj/cluster.hpp"
#include "boxproj/models.hpp"
#include "boxproj/montecarlo.hpp"

namespace boxproj {

inline constexpr const char* kToolVersion = "1.0.0";

/// Filesystem-level failure (open/write), as opposed to malformed content.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the same double (up to 17
/// significant digits), locale-independent.
std::string format_double(double x);
double parse_double(std::string_view text);

/// CSV schema: header x1..xD, then y1..yL for L label columns (L is 0, 1 or
/// D). Rows carry 17-significant-digit coordinates and 0/1 labels, so a
/// round trip reproduces every double bit for bit.
std::string pointset_to_csv(const PointSet& points);
PointSet pointset_from_csv(std::istream& in);
PointSet read_pointset_csv(const std::filesystem::path& path);

/// CSV schema: r,D,trials,p_hat,ci_low,ci_high,master_seed; one row per
/// cell, ratio-major to match SweepTable storage.
std::string sweep_to_csv(const SweepTable& table);
nlohmann::json sweep_to_json(const SweepTable& table);

nlohmann::json scatter_to_json(const ScatterReport& rep);
nlohmann::json threshold_to_json(const ThresholdReport& rep);
nlohmann::json model_to_json(const ModelSpec& model);
ModelSpec model_from_json(const nlohmann::json& j);

/// Everything needed to regenerate an output bit for bit: full parameters,
/// master seed, the generator algorithm id and a checksum per output file.
struct ManifestOutput {
  std::string path;
  std::uint64_t bytes = 0;
  std::uint32_t crc32 = 0;
};

struct RunManifest {
  std::string command;
  nlohmann::json parameters;
  std::uint64_t master_seed = 0;
  std::string generator = kGeneratorId;
  std::vector<ManifestOutput> outputs;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

std::uint32_t crc32_of(std::string_view bytes);

/// Writes the whole buffer or throws IoError.
void write_file(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace boxproj

#endif  // BOXPROJ_IO_HPP
