#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "reference.hpp"
#include "xyquench/io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = xyq::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(const std::vector<std::string>& args) {
  const Run r = run(args);
  REQUIRE(r.code == 0);
  return json::parse(r.out);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "xyquench_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("correlators") {
  auto j = run_json({"correlators", "--gamma", "1", "--h", "0", "--ground"});
  CHECK(j["sxsx"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(j["sysy"].get<double>()) < 1e-12);
  CHECK(std::abs(j["szsz"].get<double>()) < 1e-12);
  j = run_json({"correlators", "--gamma", "1", "--h", "0", "--temperature", "1e12"});
  for (const char* k : {"g_c", "g_s", "g_0", "sxsx", "sysy", "szsz", "sz"}) CHECK(std::abs(j[k].get<double>()) < 1e-11);
  j = run_json({"correlators", "--gamma", "0.6", "--h", "0.8", "--ground"});
  CHECK(std::abs(j["szsz"].get<double>() - std::pow(j["sz"].get<double>(), 2)) < 1e-8);

  const Run csv = run({"correlators", "--gamma", "1", "--h", "0", "--ground", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("g_c,g_s,g_0,sxsx,sysy,szsz,sz\n", 0) == 0);
}

TEST_CASE("numbers carry 17 significant digits") {
  const Run r = run({"correlators", "--gamma", "0.5", "--h", "0.5", "--ground"});
  const json j = json::parse(r.out);
  CHECK(j["g_c"].get<double>() == doctest::Approx(ref::kGroundGc).epsilon(1e-12));
  CHECK(r.out.find(xyq::format_real(j["g_c"].get<double>())) != std::string::npos);
}

TEST_CASE("witness") {
  auto j = run_json({"witness", "--gamma", "1", "--h", "0", "--ground"});
  CHECK(std::abs(j["mu1"].get<double>()) < 1e-12);
  CHECK(std::abs(j["mu2"].get<double>()) < 1e-12);
  CHECK(j["negativity"].get<double>() < 1e-12);
  j = run_json({"witness", "--from-correlators", "0,0,0,0"});
  CHECK(j["mu1"].get<double>() == 0.25);
  CHECK(j["mu2"].get<double>() == 0.25);
  CHECK(j["negativity"].get<double>() == 0.0);
  CHECK(j["detection"] == "Undetected");
  j = run_json({"witness", "--gamma", "1", "--h", "2", "--quench", "1", "0"});
  CHECK(std::abs(j["mu1"].get<double>() - ref::kGgeMu1) < 1e-10);
  CHECK(std::abs(j["mu2"].get<double>() - ref::kGgeMu2) < 1e-10);
}

TEST_CASE("tth") {
  auto j = run_json({"tth", "--gamma", "0.5", "--h", "0.7", "--gamma0", "0.5", "--h0", "0.7"});
  CHECK(j["t_th"].get<double>() == 0.0);
  j = run_json({"tth", "--gamma", "1", "--h", "2", "--gamma0", "1", "--h0", "0"});
  CHECK(j["residual"].get<double>() < 1e-10);
  CHECK(j["t_th"].get<double>() == doctest::Approx(ref::kTth).epsilon(1e-8));
  CHECK(j["postquench_energy_density"].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));
  j = run_json({"tth", "--gamma", "0.5", "--h", "0.7", "--gamma0", "0.9", "--h0", "0.7"});
  CHECK(j["t_th"].get<double>() > 0.0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"correlators", "--gamma", "1", "--h", "0"}).code == 2);
  CHECK(run({"correlators", "--gamma", "1", "--h", "0", "--ground", "--temperature", "1"}).code == 2);
  CHECK(run({"correlators", "--gamma", "1", "--ground"}).code == 2);
  CHECK(run({"correlators", "--gamma", "x", "--h", "0", "--ground"}).code == 2);
  CHECK(run({"correlators", "--gamma", "1", "--h", "0", "--ground", "--format", "xml"}).code == 2);
  CHECK(run({"correlators", "--gamma", "1", "--h", "0", "--temperature", "-1"}).code == 2);
  CHECK(run({"witness", "--from-correlators", "1,2"}).code == 2);
  CHECK(run({"witness", "--from-correlators", "0,0,0,0", "--ground"}).code == 2);
  CHECK(run({"tth", "--gamma", "1", "--h", "2"}).code == 2);
  CHECK(run({"scan", "--h-range", "0:1"}).code == 2);
  CHECK(run({"scan", "--h-range", "0:2:1"}).code == 2);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("scan") != std::string::npos);
}

TEST_CASE("numerical failures exit with 3") {
  const Run r = run({"correlators", "--gamma", "0.3", "--h", "1.4", "--quench", "0.2", "0.3", "--rel-tol", "1e-15",
                     "--abs-tol", "1e-300", "--max-refinements", "3"});
  CHECK(r.code == 3);
  CHECK(!r.err.empty());
  CHECK(run({"witness", "--from-correlators", "1,-1,1,1"}).code == 3);
}

TEST_CASE("scan csv, svg and boundary files") {
  const fs::path csv = scratch("scan.csv");
  const fs::path svg = scratch("scan.svg");
  const fs::path bnd = scratch("boundary.csv");
  const Run r = run({"scan", "--gamma", "1", "--h0-range", "0:2:2", "--h-range", "0:2:2", "--threads", "2", "--out",
                     csv.string(), "--svg", svg.string(), "--boundary", bnd.string()});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("scan:") != std::string::npos);
  const std::string text = slurp(csv);
  std::istringstream in(text);
  const auto rows = xyq::read_scan_csv(in);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].t_th == 0.0);
  CHECK(rows[3].t_th == 0.0);
  CHECK(rows[1].t_th > 0.0);
  CHECK(slurp(svg).find("</svg>") != std::string::npos);
  CHECK(slurp(bnd).rfind("detector,ensemble,h0,h,mu\n", 0) == 0);
}

TEST_CASE("scan config file and flag overrides") {
  const fs::path cfg = scratch("scan.toml");
  {
    std::ofstream f(cfg);
    f << "# window\ngamma = 0.5\ngamma0 = 0.5\nh0_range = [0.0, 1.0, 2]\nh_range = [0.2, 1.2, 3]\n"
         "detection_threshold = -1e-12\nthreads = 2\n\n[quadrature]\nrel_tol = 1e-10\nabs_tol = 1e-12\n"
         "max_refinements = 20\nbreakpoints = [0.5]\n";
  }
  Run r = run({"scan", "--config", cfg.string(), "--quiet"});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  std::istringstream in(r.out);
  auto rows = xyq::read_scan_csv(in);
  REQUIRE(rows.size() == 6);
  CHECK(rows[5].h0 == 1.0);
  CHECK(rows[5].h == doctest::Approx(1.2).epsilon(1e-15));

  r = run({"scan", "--config", cfg.string(), "--quiet", "--h-range", "0:1:2"});
  REQUIRE(r.code == 0);
  std::istringstream in2(r.out);
  rows = xyq::read_scan_csv(in2);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].h == 1.0);

  {
    std::ofstream f(cfg);
    f << "gamma = 0.5\nunknown_key = 3\n";
  }
  CHECK(run({"scan", "--config", cfg.string()}).code == 2);
  CHECK(run({"scan", "--config", scratch("missing.toml").string()}).code == 2);
}

TEST_CASE("thread environment fallback") {
  setenv("QW_THREADS", "3", 1);
  const Run r = run({"scan", "--gamma", "1", "--h0-range", "0:1:2", "--h-range", "0:1:2"});
  CHECK(r.code == 0);
  CHECK(r.err.find("on 3 threads") != std::string::npos);
  setenv("QW_THREADS", "many", 1);
  CHECK(run({"scan", "--gamma", "1", "--h0-range", "0:1:2", "--h-range", "0:1:2"}).code == 2);
  unsetenv("QW_THREADS");
}

TEST_CASE("scan output does not depend on thread count") {
  const Run a = run({"scan", "--gamma", "0.7", "--h0-range", "0:2:6", "--h-range", "0:2:6", "--threads", "1", "--quiet"});
  const Run b = run({"scan", "--gamma", "0.7", "--h0-range", "0:2:6", "--h-range", "0:2:6", "--threads", "8", "--quiet"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("oracle-check") {
  const Run r = run({"oracle-check", "--samples", "100"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["eigen_max_deviation"].get<double>() <= 1e-10);
  CHECK(j["finite_chain_max_error"].get<double>() <= 1e-3);
}
