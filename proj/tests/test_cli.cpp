#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "boxproj/cli.hpp"
#include "boxproj/cluster.hpp"
#include "boxproj/io.hpp"
#include "boxproj/projection.hpp"

using namespace boxproj;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("boxproj_cli_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

struct EnvGuard {
  std::string name;
  std::string old_value;
  bool had_value;
  EnvGuard(const char* var, const char* value) : name(var) {
    const char* prev = std::getenv(var);
    had_value = prev != nullptr;
    if (had_value) old_value = prev;
    setenv(var, value, 1);
  }
  ~EnvGuard() {
    if (had_value)
      setenv(name.c_str(), old_value.c_str(), 1);
    else
      unsetenv(name.c_str());
  }
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("no subcommand is a usage error, --help succeeds") {
  const CliResult none = run({});
  CHECK(none.code == kExitUsage);

  const CliResult help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("generate") != std::string::npos);
  CHECK(help.out.find("sweep") != std::string::npos);
  CHECK(help.out.find("diagnose") != std::string::npos);
}

TEST_CASE("generate box vertices with manifest") {
  TempDir dir;
  const std::string out_path = dir.file("box.csv");
  const CliResult r = run({"generate", "--model", "box", "--dim", "3", "--ratio", "2",
                           "--enumerate", "--out", out_path});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("wrote " + out_path) != std::string::npos);
  CHECK(r.out.find("generated 8 points") != std::string::npos);

  const std::string csv = read_file(out_path);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  CHECK(csv.rfind("x1,x2,x3,y1,y2,y3\n", 0) == 0);
  CHECK(csv.find("1.4142135623730951") != std::string::npos);

  const nlohmann::json m = nlohmann::json::parse(read_file(out_path + ".manifest.json"));
  CHECK(m.at("tool") == "boxproj");
  CHECK(m.at("command") == "generate");
  CHECK(m.at("generator") == std::string(kGeneratorId));
  CHECK(m.at("parameters").at("model").at("model") == "box");
  CHECK(m.at("parameters").at("model").at("r") == 2.0);
  REQUIRE(m.at("outputs").size() == 1);
  CHECK(m.at("outputs")[0].at("path") == out_path);
  CHECK(m.at("outputs")[0].at("bytes") == csv.size());
  char hex[16];
  std::snprintf(hex, sizeof(hex), "%08x", static_cast<unsigned>(crc32_of(csv)));
  CHECK(m.at("outputs")[0].at("crc32") == hex);
}

TEST_CASE("generate argument validation") {
  TempDir dir;
  const std::string out_path = dir.file("pts.csv");
  // mixture requires --a and --n, and cannot enumerate
  CHECK(run({"generate", "--model", "mixture", "--dim", "4", "--n", "10", "--out", out_path})
            .code == kExitUsage);
  CHECK(run({"generate", "--model", "mixture", "--dim", "4", "--a", "3", "--out", out_path})
            .code == kExitUsage);
  CHECK(run({"generate", "--model", "mixture", "--dim", "4", "--a", "3", "--enumerate", "--out",
             out_path})
            .code == kExitUsage);
  // unknown model name
  CHECK(run({"generate", "--model", "torus", "--dim", "4", "--n", "10", "--out", out_path}).code ==
        kExitUsage);
  // box sampling needs a sample count
  CHECK(run({"generate", "--model", "box", "--dim", "4", "--ratio", "1.5", "--out", out_path})
            .code == kExitUsage);
  // ratio outside [1,2] requires the override
  CHECK(run({"generate", "--model", "box", "--dim", "4", "--ratio", "3", "--enumerate", "--out",
             out_path})
            .code == kExitUsage);
  CHECK(run({"generate", "--model", "box", "--dim", "4", "--ratio", "3", "--allow-any-ratio",
             "--enumerate", "--out", out_path})
            .code == kExitOk);
  // --enumerate and --n conflict at parse time
  CHECK(run({"generate", "--model", "box", "--dim", "4", "--ratio", "1.5", "--n", "8",
             "--enumerate", "--out", out_path})
            .code == kExitUsage);
}

TEST_CASE("generate is deterministic in the seed") {
  TempDir dir;
  const std::string p1 = dir.file("a.csv");
  const std::string p2 = dir.file("b.csv");
  const std::string p3 = dir.file("c.csv");
  auto gen = [&](const std::string& path, const char* seed) {
    return run({"generate", "--model", "mixture", "--dim", "5", "--a", "4", "--n", "200", "--seed",
                seed, "--out", path});
  };
  REQUIRE(gen(p1, "42").code == kExitOk);
  REQUIRE(gen(p2, "42").code == kExitOk);
  REQUIRE(gen(p3, "43").code == kExitOk);
  CHECK(read_file(p1) == read_file(p2));
  CHECK(read_file(p1) != read_file(p3));
}

TEST_CASE("analyze a box along its long axis") {
  TempDir dir;
  const std::string pts = dir.file("box.csv");
  REQUIRE(run({"generate", "--model", "box", "--dim", "3", "--ratio", "1.5", "--enumerate",
               "--out", pts})
              .code == kExitOk);

  const CliResult r = run({"analyze", "--points", pts, "--axis", "3"});
  REQUIRE(r.code == kExitOk);
  const nlohmann::json rep = nlohmann::json::parse(r.out);
  CHECK(rep.at("n") == 8);
  CHECK(rep.at("dim") == 3);
  CHECK(rep.at("direction").at("type") == "axis");
  CHECK(rep.at("direction").at("coords") == std::vector<double>{0.0, 0.0, 1.0});
  REQUIRE(rep.at("axes").size() == 3);

  // partition by the third label column: the two 4-point faces of the box
  const nlohmann::json& ax3 = rep.at("axes")[2];
  CHECK(ax3.at("axis") == 3);
  CHECK(std::fabs(ax3.at("scatter").at("within").get<double>() - 0.5) <= 1e-12);
  CHECK(std::fabs(ax3.at("scatter").at("between").get<double>() - 0.375) <= 1e-12);
  CHECK(ax3.at("scatter").at("is_cluster") == false);
  CHECK(ax3.at("threshold").at("error") == 0.0);
  const double half_a3 = std::sqrt(1.5) / 2.0;
  CHECK(std::fabs(ax3.at("threshold").at("threshold").get<double>() - half_a3) <= 1e-12);
  CHECK(ax3.at("threshold").at("analytic").is_null());

  // the short axes cannot be separated by the long-axis projection
  CHECK(rep.at("axes")[0].at("threshold").at("error") == 0.5);
  CHECK(rep.at("axes")[1].at("threshold").at("error") == 0.5);

  // axis beyond the dimension
  CHECK(run({"analyze", "--points", pts, "--axis", "5"}).code == kExitUsage);
}

TEST_CASE("analyze failure modes") {
  TempDir dir;
  CHECK(run({"analyze", "--points", dir.file("absent.csv"), "--axis", "1"}).code == kExitIo);

  const std::string bare = dir.file("bare.csv");
  write_file(bare, "x1,x2\n0,1\n1,0\n");
  CHECK(run({"analyze", "--points", bare, "--axis", "1"}).code == kExitUsage);

  // a constant label column is reported as degenerate, not an error
  const std::string flat = dir.file("flat.csv");
  write_file(flat, "x1,y1\n1,0\n2,0\n");
  const CliResult r = run({"analyze", "--points", flat, "--axis", "1"});
  REQUIRE(r.code == kExitOk);
  const nlohmann::json rep = nlohmann::json::parse(r.out);
  CHECK(rep.at("axes")[0].at("degenerate") == true);
}

TEST_CASE("analyze recovers the analytic error from a generate manifest") {
  TempDir dir;
  const std::string pts = dir.file("mix.csv");
  REQUIRE(run({"generate", "--model", "mixture", "--dim", "4", "--a", "6", "--n", "50", "--seed",
               "3", "--out", pts})
              .code == kExitOk);

  const CliResult r = run({"analyze", "--points", pts, "--model-json", pts + ".manifest.json",
                           "--seed", "12"});
  REQUIRE(r.code == kExitOk);
  const nlohmann::json rep = nlohmann::json::parse(r.out);
  CHECK(rep.at("direction").at("type") == "random");
  CHECK(rep.at("model").at("model") == "mixture");

  const ProjectionVector dir_v = random_unit_vector(4, SeedSpec{12, 0});
  const double expect = analytic_min_error(6.0, dir_v.coords[0]);
  CHECK(rep.at("axes")[0].at("threshold").at("analytic").get<double>() == expect);
}

TEST_CASE("analyze writes report and projection files") {
  TempDir dir;
  const std::string pts = dir.file("box.csv");
  REQUIRE(run({"generate", "--model", "box", "--dim", "2", "--ratio", "1", "--enumerate", "--out",
               pts})
              .code == kExitOk);
  const std::string rep_path = dir.file("report.json");
  const std::string proj_path = dir.file("proj.csv");
  const CliResult r = run({"analyze", "--points", pts, "--axis", "1", "--out", rep_path,
                           "--projection-out", proj_path});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("wrote " + rep_path) != std::string::npos);
  CHECK(nlohmann::json::parse(read_file(rep_path)).at("command") == "analyze");
  CHECK(read_file(proj_path) == "t\n0\n1\n0\n1\n");
  CHECK(fs::exists(rep_path + ".manifest.json"));
}

TEST_CASE("sweep writes a table, a chart and a manifest") {
  TempDir dir;
  const std::string table_path = dir.file("table.csv");
  const std::string svg_path = dir.file("chart.svg");
  const CliResult r =
      run({"sweep", "--r-grid", "1.0,1.5", "--d-grid", "2,3", "--trials", "4096", "--seed", "5",
           "--out", table_path, "--svg", svg_path});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("swept 2 ratios x 2 dims") != std::string::npos);

  const std::string csv = read_file(table_path);
  const SweepTable direct = sweep({1.0, 1.5}, {2, 3}, 4096, 5);
  CHECK(csv == sweep_to_csv(direct));

  const std::string svg = read_file(svg_path);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("D = 2") != std::string::npos);
  CHECK(svg.find("D = 3") != std::string::npos);
  CHECK(svg.find("separation probability") != std::string::npos);

  const nlohmann::json m = nlohmann::json::parse(read_file(table_path + ".manifest.json"));
  CHECK(m.at("outputs").size() == 2);
  CHECK(m.at("parameters").at("r_values") == std::vector<double>{1.0, 1.5});
}

TEST_CASE("sweep grid parsing and stdout modes") {
  const CliResult r =
      run({"sweep", "--r-grid", "1.0:2.0:0.5", "--d-grid", "2", "--trials", "256"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("r,D,trials,p_hat,ci_low,ci_high,master_seed\n", 0) == 0);
  CHECK(r.out.find("\n1,2,256,") != std::string::npos);
  CHECK(r.out.find("\n1.5,2,256,") != std::string::npos);
  CHECK(r.out.find("\n2,2,256,") != std::string::npos);

  const CliResult j = run({"sweep", "--r-grid", "1.25", "--d-grid", "2,4", "--trials", "256",
                           "--format", "json"});
  REQUIRE(j.code == kExitOk);
  const nlohmann::json table = nlohmann::json::parse(j.out);
  CHECK(table.at("cells").size() == 2);
  CHECK(table.at("cells")[1].at("D") == 4);

  CHECK(run({"sweep", "--r-grid", "2:1:0.1", "--d-grid", "2", "--trials", "16"}).code ==
        kExitUsage);
  CHECK(run({"sweep", "--r-grid", "1:2:0.5", "--d-grid", "2", "--trials", "16", "--format",
             "xml"})
            .code == kExitUsage);
}

TEST_CASE("diagnose lemma1 reports a KS distance") {
  const CliResult r = run({"diagnose", "lemma1", "--dim", "5", "--samples", "1000"});
  REQUIRE(r.code == kExitOk);
  const nlohmann::json rep = nlohmann::json::parse(r.out);
  CHECK(rep.at("command") == "diagnose lemma1");
  const double ks = rep.at("ks").get<double>();
  CHECK(ks > 0.0);
  CHECK(ks < 0.2);
  CHECK(rep.at("ks_critical_1pct").get<double>() > 0.0);

  const CliResult big = run({"diagnose", "lemma1", "--dim", "1000", "--samples", "2000"});
  REQUIRE(big.code == kExitOk);
  const nlohmann::json brep = nlohmann::json::parse(big.out);
  CHECK(brep.at("consistent_with_normal") == true);
  CHECK(brep.at("ks").get<double>() < ks);
}

TEST_CASE("diagnose errdist at zero separation is pinned at one half") {
  const CliResult r =
      run({"diagnose", "errdist", "--dim", "4", "--a", "0", "--trials", "500"});
  REQUIRE(r.code == kExitOk);
  const nlohmann::json rep = nlohmann::json::parse(r.out);
  CHECK(rep.at("median") == 0.5);
  CHECK(rep.at("frac_below_0_1") == 0.0);
  CHECK(rep.at("frac_above_0_4") == 1.0);
}

TEST_CASE("diagnose whiten on the unit cube changes nothing") {
  const CliResult r =
      run({"diagnose", "whiten", "--dim", "3", "--ratio", "1", "--trials", "2000"});
  REQUIRE(r.code == kExitOk);
  const nlohmann::json rep = nlohmann::json::parse(r.out);
  CHECK(rep.at("original").at("p_hat") == rep.at("whitened").at("p_hat"));
  CHECK(rep.at("whitening_lowers_probability") == false);

  CHECK(run({"diagnose", "whiten", "--dim", "3", "--ratio", "2.5", "--trials", "100"}).code ==
        kExitUsage);
}

TEST_CASE("diagnose brute matches the exhaustive scan") {
  const CliResult none = run({"diagnose", "brute", "--dim", "3", "--ratio", "2"});
  REQUIRE(none.code == kExitOk);
  CHECK(nlohmann::json::parse(none.out).at("found") == false);

  const CliResult hit =
      run({"diagnose", "brute", "--dim", "3", "--ratio", "2.5", "--allow-any-ratio"});
  REQUIRE(hit.code == kExitOk);
  const nlohmann::json rep = nlohmann::json::parse(hit.out);
  CHECK(rep.at("found") == true);
  CHECK(rep.at("partition") == std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1});
  CHECK(rep.at("scatter").at("is_cluster") == true);

  // 2^5 vertices exceed the exhaustive-scan cap
  CHECK(run({"diagnose", "brute", "--dim", "5", "--ratio", "1.5"}).code == kExitUsage);
}

TEST_CASE("write failures surface as the I/O exit code") {
  TempDir dir;
  const std::string bad = (dir.path / "missing" / "x.csv").string();
  CHECK(run({"generate", "--model", "box", "--dim", "2", "--ratio", "1", "--enumerate", "--out",
             bad})
            .code == kExitIo);
}

TEST_CASE("sweep output bytes do not depend on the worker count") {
  TempDir dir;
  const std::string p1 = dir.file("t1.csv");
  const std::string p7 = dir.file("t7.csv");
  {
    EnvGuard env("BOXPROJ_THREADS", "1");
    REQUIRE(run({"sweep", "--r-grid", "1.0,2.0", "--d-grid", "3", "--trials", "4096", "--seed",
                 "9", "--out", p1})
                .code == kExitOk);
  }
  {
    EnvGuard env("BOXPROJ_THREADS", "7");
    REQUIRE(run({"sweep", "--r-grid", "1.0,2.0", "--d-grid", "3", "--trials", "4096", "--seed",
                 "9", "--out", p7})
                .code == kExitOk);
  }
  CHECK(read_file(p1) == read_file(p7));
}

TEST_SUITE_END();
