#include "boxproj/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace boxproj {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void bad_csv(const std::string& what) {
  throw std::invalid_argument("point CSV: " + what);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
  return x;
}

std::string pointset_to_csv(const PointSet& points) {
  std::string out;
  for (std::size_t i = 1; i <= points.dim; ++i) {
    if (i > 1) out += ',';
    out += 'x';
    out += std::to_string(i);
  }
  for (std::size_t i = 1; i <= points.label_dim; ++i) {
    out += ",y";
    out += std::to_string(i);
  }
  out += '\n';
  for (std::size_t j = 0; j < points.count; ++j) {
    for (std::size_t i = 0; i < points.dim; ++i) {
      if (i > 0) out += ',';
      out += format_double(points.coords[j * points.dim + i]);
    }
    for (std::size_t i = 0; i < points.label_dim; ++i) {
      out += ',';
      out += points.labels[j * points.label_dim + i] ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

PointSet pointset_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) bad_csv("empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split(line, ',');
  std::size_t dim = 0;
  std::size_t label_dim = 0;
  for (const auto& name : header) {
    const bool is_x = name.size() >= 2 && name[0] == 'x';
    const bool is_y = name.size() >= 2 && name[0] == 'y';
    if (is_x && label_dim == 0) {
      ++dim;
      if (name != "x" + std::to_string(dim)) bad_csv("unexpected header column order");
    } else if (is_y) {
      ++label_dim;
      if (name != "y" + std::to_string(label_dim)) bad_csv("unexpected header column order");
    } else {
      bad_csv("unrecognized header column '" + std::string(name) + "'");
    }
  }
  if (dim == 0) bad_csv("no coordinate columns");
  if (label_dim != 0 && label_dim != 1 && label_dim != dim)
    bad_csv("label columns must number 0, 1 or dim");

  PointSet ps;
  ps.dim = dim;
  ps.label_dim = label_dim;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != dim + label_dim)
      bad_csv("row " + std::to_string(ps.count + 2) + " has " + std::to_string(fields.size()) +
              " fields, expected " + std::to_string(dim + label_dim));
    for (std::size_t i = 0; i < dim; ++i) ps.coords.push_back(parse_double(fields[i]));
    for (std::size_t i = 0; i < label_dim; ++i) {
      const auto f = fields[dim + i];
      if (f == "0")
        ps.labels.push_back(0);
      else if (f == "1")
        ps.labels.push_back(1);
      else
        bad_csv("labels must be 0 or 1, got '" + std::string(f) + "'");
    }
    ++ps.count;
  }
  if (ps.count == 0) bad_csv("no data rows");
  return ps;
}

PointSet read_pointset_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return pointset_from_csv(in);
}

std::string sweep_to_csv(const SweepTable& table) {
  std::string out = "r,D,trials,p_hat,ci_low,ci_high,master_seed\n";
  for (std::size_t ri = 0; ri < table.r_values.size(); ++ri) {
    for (std::size_t di = 0; di < table.d_values.size(); ++di) {
      const EstimateWithCI& c = table.cell(ri, di);
      out += format_double(table.r_values[ri]);
      out += ',';
      out += std::to_string(table.d_values[di]);
      out += ',';
      out += std::to_string(c.trials);
      out += ',';
      out += format_double(c.p_hat);
      out += ',';
      out += format_double(c.ci_low);
      out += ',';
      out += format_double(c.ci_high);
      out += ',';
      out += std::to_string(table.master_seed);
      out += '\n';
    }
  }
  return out;
}

nlohmann::json sweep_to_json(const SweepTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t ri = 0; ri < table.r_values.size(); ++ri) {
    for (std::size_t di = 0; di < table.d_values.size(); ++di) {
      const EstimateWithCI& c = table.cell(ri, di);
      rows.push_back({{"r", table.r_values[ri]},
                      {"D", table.d_values[di]},
                      {"trials", c.trials},
                      {"p_hat", c.p_hat},
                      {"ci_low", c.ci_low},
                      {"ci_high", c.ci_high},
                      {"master_seed", table.master_seed}});
    }
  }
  return {{"r_values", table.r_values},
          {"d_values", table.d_values},
          {"trials_per_cell", table.trials_per_cell},
          {"master_seed", table.master_seed},
          {"cells", std::move(rows)}};
}

nlohmann::json scatter_to_json(const ScatterReport& rep) {
  return {{"within", rep.within},
          {"between", rep.between},
          {"total", rep.total},
          {"is_cluster", rep.is_cluster}};
}

nlohmann::json threshold_to_json(const ThresholdReport& rep) {
  nlohmann::json j = {{"threshold", rep.threshold}, {"error", rep.error}};
  if (rep.analytic)
    j["analytic"] = *rep.analytic;
  else
    j["analytic"] = nullptr;
  return j;
}

nlohmann::json model_to_json(const ModelSpec& model) {
  if (const auto* mix = std::get_if<GaussianMixtureSpec>(&model)) {
    return {{"model", "mixture"},
            {"dim", mix->dim},
            {"a", mix->separation},
            {"e", mix->direction}};
  }
  const auto& box = std::get<BoxSpec>(model);
  return {{"model", "box"}, {"dim", box.dim}, {"r", box.ratio}};
}

ModelSpec model_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("model").get<std::string>();
  const int dim = j.at("dim").get<int>();
  if (kind == "mixture") {
    const double a = j.at("a").get<double>();
    if (j.contains("e") && !j.at("e").is_null())
      return GaussianMixtureSpec(dim, a, j.at("e").get<std::vector<double>>());
    return GaussianMixtureSpec(dim, a);
  }
  if (kind == "box") {
    // Stored specs were validated at creation; ratios outside [1,2] are
    // legitimate here (they required the override to produce).
    return BoxSpec(dim, j.at("r").get<double>(), /*allow_ratio_outside_range=*/true);
  }
  throw std::invalid_argument("unknown model kind '" + kind + "'");
}

nlohmann::json manifest_to_json(const RunManifest& manifest) {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : manifest.outputs) {
    char hex[16];
    std::snprintf(hex, sizeof(hex), "%08x", static_cast<unsigned>(o.crc32));
    outs.push_back({{"path", o.path}, {"bytes", o.bytes}, {"crc32", std::string(hex)}});
  }
  return {{"tool", "boxproj"},
          {"version", kToolVersion},
          {"command", manifest.command},
          {"parameters", manifest.parameters},
          {"master_seed", manifest.master_seed},
          {"generator", manifest.generator},
          {"outputs", std::move(outs)}};
}

std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto chunk = static_cast<uInt>(
        std::min<std::size_t>(bytes.size() - off, 1u << 30));
    crc = ::crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + off), chunk);
    off += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return std::move(ss).str();
}

}  // namespace boxproj
