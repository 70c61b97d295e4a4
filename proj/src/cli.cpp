#include "boxproj/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string_view>

#include "boxproj/io.hpp"
#include "boxproj/projection.hpp"

namespace boxproj {

namespace {

constexpr const char* kPalette[10] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

std::vector<std::string> split_text(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

// "1.0,1.5,2.0" or "lo:hi:step". Stepped grids are snapped to 12 decimal
// digits so cells carry the intended decimal ratios, not accumulated sums.
std::vector<double> parse_r_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto parts = split_text(text, ':');
    if (parts.size() != 3)
      throw std::invalid_argument("ratio grid must be lo:hi:step or a comma list");
    const double lo = parse_double(parts[0]);
    const double hi = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || hi < lo)
      throw std::invalid_argument("ratio grid needs hi >= lo and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 10000) throw std::invalid_argument("ratio grid has more than 10000 values");
    for (std::size_t i = 0; i < count; ++i) {
      const double x = lo + static_cast<double>(i) * step;
      grid.push_back(std::round(x * 1e12) / 1e12);
    }
  } else {
    for (const auto& tok : split_text(text, ',')) grid.push_back(parse_double(tok));
  }
  if (grid.empty()) throw std::invalid_argument("ratio grid is empty");
  return grid;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// Writes every (path, content) pair plus one manifest named after the first
// path, and echoes what landed where.
void write_outputs(const std::string& command, nlohmann::json parameters, std::uint64_t seed,
                   const std::vector<std::pair<std::filesystem::path, std::string>>& files,
                   std::ostream& out) {
  RunManifest manifest;
  manifest.command = command;
  manifest.parameters = std::move(parameters);
  manifest.master_seed = seed;
  for (const auto& [path, content] : files) {
    write_file(path, content);
    manifest.outputs.push_back(
        {path.string(), content.size(), crc32_of(content)});
  }
  const std::filesystem::path mpath = files.front().first.string() + ".manifest.json";
  write_file(mpath, dump_json(manifest_to_json(manifest)));
  for (const auto& o : manifest.outputs)
    out << "wrote " << o.path << " (" << o.bytes << " bytes)\n";
  out << "wrote " << mpath.string() << "\n";
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOpts {
  std::string model;
  int dim = 0;
  double ratio = 1.0;
  double a = 0.0;
  bool a_set = false;
  std::vector<double> e;
  std::uint64_t n = 0;
  bool enumerate = false;
  std::uint64_t seed = 0;
  bool allow_any_ratio = false;
  std::string out_path;
};

int cmd_generate(const GenerateOpts& opt, std::ostream& out) {
  PointSet ps;
  nlohmann::json model_json;
  if (opt.model == "box") {
    const BoxSpec box(opt.dim, opt.ratio, opt.allow_any_ratio);
    model_json = model_to_json(box);
    if (opt.enumerate) {
      ps = enumerate_box_vertices(box);
    } else {
      if (opt.n == 0)
        throw std::invalid_argument("generate: pass --n for sampling or --enumerate for vertices");
      ps = sample_box(box, opt.n, SeedSpec{opt.seed, 0});
    }
  } else {
    if (opt.enumerate)
      throw std::invalid_argument("generate: --enumerate applies to the box model only");
    if (!opt.a_set) throw std::invalid_argument("generate: the mixture model needs --a");
    if (opt.n == 0) throw std::invalid_argument("generate: the mixture model needs --n");
    const GaussianMixtureSpec mix =
        opt.e.empty() ? GaussianMixtureSpec(opt.dim, opt.a)
                      : GaussianMixtureSpec(opt.dim, opt.a, opt.e);
    model_json = model_to_json(mix);
    ps = sample_gaussian_mixture(mix, opt.n, SeedSpec{opt.seed, 0});
  }

  nlohmann::json params = {{"model", model_json},
                           {"n", ps.count},
                           {"enumerate", opt.enumerate},
                           {"seed", opt.seed},
                           {"out", opt.out_path}};
  write_outputs("generate", std::move(params), opt.seed, {{opt.out_path, pointset_to_csv(ps)}},
                out);
  out << "generated " << ps.count << " points, dim " << ps.dim << ", " << ps.label_dim
      << " label column" << (ps.label_dim == 1 ? "" : "s") << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOpts {
  std::string points_path;
  int axis = 0;  // 0 = not set
  bool random_direction = false;
  std::uint64_t seed = 0;
  std::string model_json_path;
  std::string out_path;
  std::string projection_out;
};

std::optional<ModelSpec> load_model_json(const std::string& path) {
  if (path.empty()) return std::nullopt;
  const nlohmann::json j = nlohmann::json::parse(read_file(path));
  if (j.contains("parameters") && j.at("parameters").contains("model"))
    return model_from_json(j.at("parameters").at("model"));  // a run manifest
  return model_from_json(j);
}

int cmd_analyze(const AnalyzeOpts& opt, std::ostream& out) {
  const PointSet ps = read_pointset_csv(opt.points_path);
  std::optional<ModelSpec> model = load_model_json(opt.model_json_path);
  if (model && model_dim(*model) != static_cast<int>(ps.dim))
    throw std::invalid_argument("analyze: model dimension does not match the points");

  ProjectionVector dir;
  nlohmann::json dir_json;
  if (opt.axis > 0) {
    dir = axis_direction(static_cast<int>(ps.dim), opt.axis);
    dir_json = {{"type", "axis"}, {"axis", opt.axis}};
  } else {
    dir = random_unit_vector(static_cast<int>(ps.dim), SeedSpec{opt.seed, 0});
    dir_json = {{"type", "random"}, {"seed", opt.seed}};
  }
  dir_json["coords"] = dir.coords;

  const std::vector<double> proj = project(ps, dir);
  double mean = 0.0;
  double lo = proj[0];
  double hi = proj[0];
  for (double t : proj) {
    mean += t;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  mean /= static_cast<double>(proj.size());

  if (ps.label_dim == 0)
    throw std::invalid_argument(
        "analyze: input has no label columns, nothing to score the projection against");

  nlohmann::json axes = nlohmann::json::array();
  for (std::size_t col = 0; col < ps.label_dim; ++col) {
    std::vector<std::uint8_t> labels(ps.count);
    std::size_t ones = 0;
    for (std::size_t j = 0; j < ps.count; ++j) {
      labels[j] = ps.labels[j * ps.label_dim + col];
      ones += labels[j];
    }
    const auto axis_id = static_cast<int>(col) + 1;
    if (ones == 0 || ones == ps.count) {
      axes.push_back({{"axis", axis_id}, {"degenerate", true}});
      continue;
    }
    const BinaryPartition part(labels);
    const ScatterReport scatter = empirical_scatter(ps, part);
    ThresholdReport thr = empirical_min_error(proj, labels);
    if (model) {
      if (const auto* mix = std::get_if<GaussianMixtureSpec>(&*model))
        thr.analytic = analytic_min_error(mix->separation, dot(mix->direction, dir.coords));
    }
    axes.push_back({{"axis", axis_id},
                    {"scatter", scatter_to_json(scatter)},
                    {"threshold", threshold_to_json(thr)}});
  }

  nlohmann::json report = {{"command", "analyze"},
                           {"points", opt.points_path},
                           {"n", ps.count},
                           {"dim", ps.dim},
                           {"model", model ? model_to_json(*model) : nlohmann::json(nullptr)},
                           {"direction", dir_json},
                           {"projection", {{"mean", mean}, {"min", lo}, {"max", hi}}},
                           {"axes", axes}};

  std::vector<std::pair<std::filesystem::path, std::string>> files;
  if (!opt.out_path.empty()) files.emplace_back(opt.out_path, dump_json(report));
  if (!opt.projection_out.empty()) {
    std::string csv = "t\n";
    for (double t : proj) {
      csv += format_double(t);
      csv += '\n';
    }
    files.emplace_back(opt.projection_out, std::move(csv));
  }
  if (files.empty()) {
    out << dump_json(report);
    return kExitOk;
  }
  nlohmann::json params = {{"points", opt.points_path},
                           {"direction", dir_json},
                           {"model_json", opt.model_json_path},
                           {"out", opt.out_path},
                           {"projection_out", opt.projection_out}};
  write_outputs("analyze", std::move(params), opt.seed, files, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
  std::string r_grid = "1.0:2.0:0.05";
  std::vector<int> d_grid = {3, 10, 30, 100, 300};
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out_path;
  std::string svg_path;
};

int cmd_sweep(const SweepOpts& opt, std::ostream& out) {
  const std::vector<double> r_values = parse_r_grid(opt.r_grid);
  const SweepTable table = sweep(r_values, opt.d_grid, opt.trials, opt.seed);
  const std::string payload =
      opt.format == "json" ? dump_json(sweep_to_json(table)) : sweep_to_csv(table);

  std::vector<std::pair<std::filesystem::path, std::string>> files;
  if (!opt.out_path.empty()) files.emplace_back(opt.out_path, payload);
  if (!opt.svg_path.empty()) files.emplace_back(opt.svg_path, svg_sweep_chart(table));
  if (files.empty()) {
    out << payload;
    return kExitOk;
  }
  nlohmann::json params = {{"r_values", r_values},     {"d_values", opt.d_grid},
                           {"trials", opt.trials},     {"seed", opt.seed},
                           {"format", opt.format},     {"out", opt.out_path},
                           {"svg", opt.svg_path}};
  write_outputs("sweep", std::move(params), opt.seed, files, out);
  out << "swept " << r_values.size() << " ratios x " << opt.d_grid.size() << " dims, "
      << opt.trials << " trials per cell\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// diagnose

struct DiagnoseCommon {
  std::uint64_t seed = 0;
  std::string out_path;
};

int emit_diagnostic(const std::string& command, const nlohmann::json& report,
                    nlohmann::json params, const DiagnoseCommon& common, std::ostream& out) {
  if (common.out_path.empty()) {
    out << dump_json(report);
    return kExitOk;
  }
  write_outputs(command, std::move(params), common.seed, {{common.out_path, dump_json(report)}},
                out);
  return kExitOk;
}

int cmd_diagnose_lemma1(int dim, std::uint64_t samples, const DiagnoseCommon& common,
                        std::ostream& out) {
  const double ks = lemma1_diagnostic(dim, samples, SeedSpec{common.seed, 0});
  const double crit = ks_critical_value(samples, 0.01);
  const nlohmann::json report = {{"command", "diagnose lemma1"},
                                 {"dim", dim},
                                 {"samples", samples},
                                 {"seed", common.seed},
                                 {"ks", ks},
                                 {"ks_critical_1pct", crit},
                                 {"consistent_with_normal", ks <= crit}};
  return emit_diagnostic("diagnose lemma1", report,
                         {{"dim", dim}, {"samples", samples}, {"seed", common.seed}}, common, out);
}

int cmd_diagnose_errdist(int dim, double a, std::uint64_t trials, const DiagnoseCommon& common,
                         std::ostream& out) {
  const ErrorDistributionSummary s =
      error_distribution_diagnostic(dim, a, trials, SeedSpec{common.seed, 0});
  const nlohmann::json report = {{"command", "diagnose errdist"},
                                 {"dim", dim},
                                 {"a", a},
                                 {"trials", s.trials},
                                 {"seed", common.seed},
                                 {"median", s.median},
                                 {"frac_below_0_1", s.frac_below_0_1},
                                 {"frac_above_0_4", s.frac_above_0_4}};
  return emit_diagnostic(
      "diagnose errdist", report,
      {{"dim", dim}, {"a", a}, {"trials", trials}, {"seed", common.seed}}, common, out);
}

int cmd_diagnose_whiten(int dim, double ratio, std::uint64_t trials, bool allow_any_ratio,
                        const DiagnoseCommon& common, std::ostream& out) {
  if (!allow_any_ratio) BoxSpec(dim, ratio);  // range-check before the long run
  const auto [orig, white] =
      whitening_comparison(dim, ratio, trials, SeedSpec{common.seed, 0});
  auto est_json = [](const EstimateWithCI& e) {
    return nlohmann::json{
        {"p_hat", e.p_hat}, {"ci_low", e.ci_low}, {"ci_high", e.ci_high}, {"trials", e.trials}};
  };
  const nlohmann::json report = {{"command", "diagnose whiten"},
                                 {"dim", dim},
                                 {"ratio", ratio},
                                 {"trials", trials},
                                 {"seed", common.seed},
                                 {"original", est_json(orig)},
                                 {"whitened", est_json(white)},
                                 {"whitening_lowers_probability", white.ci_high < orig.ci_low}};
  return emit_diagnostic(
      "diagnose whiten", report,
      {{"dim", dim}, {"ratio", ratio}, {"trials", trials}, {"seed", common.seed}}, common, out);
}

struct BruteOpts {
  std::string points_path;
  int dim = 0;
  double ratio = 1.0;
  bool ratio_set = false;
  std::uint64_t n = 0;
  bool allow_any_ratio = false;
};

int cmd_diagnose_brute(const BruteOpts& opt, const DiagnoseCommon& common, std::ostream& out) {
  PointSet ps;
  if (!opt.points_path.empty()) {
    ps = read_pointset_csv(opt.points_path);
  } else {
    if (!opt.ratio_set || opt.dim == 0)
      throw std::invalid_argument("diagnose brute: pass --points, or --dim with --ratio");
    const BoxSpec box(opt.dim, opt.ratio, opt.allow_any_ratio);
    ps = opt.n > 0 ? sample_box(box, opt.n, SeedSpec{common.seed, 0})
                   : enumerate_box_vertices(box);
  }

  const std::optional<BinaryPartition> found = brute_force_cluster_search(ps);
  nlohmann::json report = {{"command", "diagnose brute"},
                           {"n", ps.count},
                           {"dim", ps.dim},
                           {"model", ps.model ? model_to_json(*ps.model) : nlohmann::json(nullptr)},
                           {"found", found.has_value()}};
  if (found) {
    report["partition"] = found->assignment;
    report["scatter"] = scatter_to_json(empirical_scatter(ps, *found));
  }
  nlohmann::json params = {{"points", opt.points_path},
                           {"dim", opt.dim},
                           {"ratio", opt.ratio},
                           {"n", opt.n},
                           {"seed", common.seed}};
  return emit_diagnostic("diagnose brute", report, std::move(params), common, out);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string svg_sweep_chart(const SweepTable& table) {
  const double width = 880, height = 560;
  const double left = 70, right = 700, top = 30, bottom = 505;
  double rmin = table.r_values.front();
  double rmax = table.r_values.front();
  for (double r : table.r_values) {
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (rmax == rmin) {
    rmin -= 0.5;
    rmax += 0.5;
  }
  const auto X = [&](double r) { return left + (r - rmin) / (rmax - rmin) * (right - left); };
  const auto Y = [&](double p) { return bottom - p * (bottom - top); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"#333\">\n";

  for (int i = 0; i <= 5; ++i) {
    const double p = i / 5.0;
    svg << "<line x1=\"" << left << "\" y1=\"" << Y(p) << "\" x2=\"" << right << "\" y2=\""
        << Y(p) << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << left - 10 << "\" y=\"" << Y(p) + 4
        << "\" text-anchor=\"end\">" << fmt("%g", p) << "</text>\n";
  }
  const std::size_t tick_step = std::max<std::size_t>(1, (table.r_values.size() + 11) / 12);
  for (std::size_t i = 0; i < table.r_values.size(); i += tick_step) {
    const double r = table.r_values[i];
    svg << "<line x1=\"" << X(r) << "\" y1=\"" << bottom << "\" x2=\"" << X(r) << "\" y2=\""
        << bottom + 5 << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << X(r) << "\" y=\"" << bottom + 20
        << "\" text-anchor=\"middle\">" << fmt("%g", r) << "</text>\n";
  }
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << bottom << "\" stroke=\"#333\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"#333\"/>\n"
      << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">r</text>\n"
      << "<text x=\"18\" y=\"" << (top + bottom) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (top + bottom) / 2
      << ")\">separation probability</text>\n";

  for (std::size_t di = 0; di < table.d_values.size(); ++di) {
    const char* color = kPalette[di % 10];
    for (std::size_t ri = 0; ri < table.r_values.size(); ++ri) {
      const EstimateWithCI& c = table.cell(ri, di);
      svg << "<line x1=\"" << X(table.r_values[ri]) << "\" y1=\"" << Y(c.ci_low) << "\" x2=\""
          << X(table.r_values[ri]) << "\" y2=\"" << Y(c.ci_high) << "\" stroke=\"" << color
          << "\" stroke-width=\"1\" opacity=\"0.6\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t ri = 0; ri < table.r_values.size(); ++ri)
      svg << fmt("%.2f", X(table.r_values[ri])) << ',' << fmt("%.2f", Y(table.cell(ri, di).p_hat))
          << ' ';
    svg << "\"/>\n";
    for (std::size_t ri = 0; ri < table.r_values.size(); ++ri)
      svg << "<circle cx=\"" << fmt("%.2f", X(table.r_values[ri])) << "\" cy=\""
          << fmt("%.2f", Y(table.cell(ri, di).p_hat)) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    const double ly = top + 12 + 20.0 * static_cast<double>(di);
    svg << "<line x1=\"" << right + 16 << "\" y1=\"" << ly - 4 << "\" x2=\"" << right + 44
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << right + 50 << "\" y=\"" << ly << "\">D = " << table.d_values[di]
        << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"random 1-D projections of high-dimensional two-cluster models: samplers, "
               "scatter diagnostics and separation-probability sweeps"};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* cgen = app.add_subcommand("generate", "sample a model or enumerate box vertices");
  cgen->add_option("--model", gen.model, "box or mixture")
      ->required()
      ->check(CLI::IsMember({"box", "mixture"}));
  cgen->add_option("--dim", gen.dim, "ambient dimension")->required();
  cgen->add_option("--ratio", gen.ratio, "box axis ratio r (box only)");
  auto* a_opt = cgen->add_option("--a", gen.a, "mixture separation (mixture only)");
  cgen->add_option("--e", gen.e, "mixture direction, comma separated (default axis 1)")
      ->delimiter(',');
  auto* n_opt = cgen->add_option("--n", gen.n, "number of samples");
  cgen->add_flag("--enumerate", gen.enumerate, "emit all box vertices instead of sampling")
      ->excludes(n_opt);
  cgen->add_option("--seed", gen.seed, "master seed");
  cgen->add_flag("--allow-any-ratio", gen.allow_any_ratio, "accept box ratios outside [1,2]");
  cgen->add_option("--out", gen.out_path, "points CSV path")->required();

  AnalyzeOpts ana;
  auto* cana = app.add_subcommand("analyze", "project labeled points and score the split");
  cana->add_option("--points", ana.points_path, "points CSV")->required();
  auto* axis_opt = cana->add_option("--axis", ana.axis, "project onto this basis axis (1-based)");
  cana->add_flag("--random-direction", ana.random_direction,
                 "project onto a seeded random unit direction (default)")
      ->excludes(axis_opt);
  cana->add_option("--seed", ana.seed, "master seed for the random direction");
  cana->add_option("--model-json", ana.model_json_path,
                   "model JSON (or a generate manifest) enabling analytic error");
  cana->add_option("--out", ana.out_path, "report JSON path (default: print)");
  cana->add_option("--projection-out", ana.projection_out, "projected values CSV path");

  SweepOpts swp;
  auto* cswp = app.add_subcommand("sweep", "separation probability over a (r, D) grid");
  cswp->add_option("--r-grid", swp.r_grid, "ratios: comma list or lo:hi:step")
      ->capture_default_str();
  cswp->add_option("--d-grid", swp.d_grid, "dimensions, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  cswp->add_option("--trials", swp.trials, "Monte Carlo trials per cell")->capture_default_str();
  cswp->add_option("--seed", swp.seed, "master seed");
  cswp->add_option("--format", swp.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cswp->add_option("--out", swp.out_path, "table path (default: print)");
  cswp->add_option("--svg", swp.svg_path, "also render a chart to this path");

  auto* cdia = app.add_subcommand("diagnose", "statistical checks of the machinery");
  cdia->require_subcommand(1);

  DiagnoseCommon dlem;
  int lem_dim = 0;
  std::uint64_t lem_samples = 10000;
  auto* clem = cdia->add_subcommand(
      "lemma1", "KS distance of a scaled unit-vector coordinate from standard normal");
  clem->add_option("--dim", lem_dim, "unit vector dimension")->required();
  clem->add_option("--samples", lem_samples, "number of vectors")->capture_default_str();
  clem->add_option("--seed", dlem.seed, "master seed");
  clem->add_option("--out", dlem.out_path, "report JSON path (default: print)");

  DiagnoseCommon derr;
  int err_dim = 0;
  double err_a = 0.0;
  std::uint64_t err_trials = 50000;
  auto* cerrd = cdia->add_subcommand(
      "errdist", "distribution of the best threshold error over random directions");
  cerrd->add_option("--dim", err_dim, "mixture dimension")->required();
  cerrd->add_option("--a", err_a, "mixture separation")->required();
  cerrd->add_option("--trials", err_trials, "number of directions")->capture_default_str();
  cerrd->add_option("--seed", derr.seed, "master seed");
  cerrd->add_option("--out", derr.out_path, "report JSON path (default: print)");

  DiagnoseCommon dwhi;
  int whi_dim = 0;
  double whi_ratio = 0.0;
  std::uint64_t whi_trials = 100000;
  bool whi_allow = false;
  auto* cwhi = cdia->add_subcommand(
      "whiten", "separation probability of the box against its whitened counterpart");
  cwhi->add_option("--dim", whi_dim, "box dimension")->required();
  cwhi->add_option("--ratio", whi_ratio, "box axis ratio")->required();
  cwhi->add_option("--trials", whi_trials, "Monte Carlo trials")->capture_default_str();
  cwhi->add_flag("--allow-any-ratio", whi_allow, "accept box ratios outside [1,2]");
  cwhi->add_option("--seed", dwhi.seed, "master seed");
  cwhi->add_option("--out", dwhi.out_path, "report JSON path (default: print)");

  DiagnoseCommon dbru;
  BruteOpts bru;
  auto* cbru = cdia->add_subcommand(
      "brute", "exhaustive scatter scan over all bipartitions (at most 16 points)");
  cbru->add_option("--points", bru.points_path, "points CSV to scan");
  cbru->add_option("--dim", bru.dim, "box dimension (when no --points)");
  cbru->add_option("--ratio", bru.ratio, "box axis ratio")->each([&](const std::string&) {
    bru.ratio_set = true;
  });
  cbru->add_option("--n", bru.n, "sample this many box points instead of enumerating");
  cbru->add_flag("--allow-any-ratio", bru.allow_any_ratio, "accept box ratios outside [1,2]");
  cbru->add_option("--seed", dbru.seed, "master seed for sampling");
  cbru->add_option("--out", dbru.out_path, "report JSON path (default: print)");

  int rc = kExitOk;
  cgen->callback([&] {
    gen.a_set = a_opt->count() > 0;
    rc = cmd_generate(gen, out);
  });
  cana->callback([&] { rc = cmd_analyze(ana, out); });
  cswp->callback([&] { rc = cmd_sweep(swp, out); });
  clem->callback([&] { rc = cmd_diagnose_lemma1(lem_dim, lem_samples, dlem, out); });
  cerrd->callback([&] { rc = cmd_diagnose_errdist(err_dim, err_a, err_trials, derr, out); });
  cwhi->callback(
      [&] { rc = cmd_diagnose_whiten(whi_dim, whi_ratio, whi_trials, whi_allow, dwhi, out); });
  cbru->callback([&] { rc = cmd_diagnose_brute(bru, dbru, out); });

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return rc;
}

}  // namespace boxproj
