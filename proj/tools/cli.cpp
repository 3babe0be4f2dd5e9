#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "checks.hpp"
#include "xyquench/correlators.hpp"
#include "xyquench/ensemble.hpp"
#include "xyquench/entanglement.hpp"
#include "xyquench/io.hpp"
#include "xyquench/kernels.hpp"
#include "xyquench/model.hpp"
#include "xyquench/scan.hpp"

namespace xyq::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadOptions {
  double rel_tol = QuadratureSpec{}.rel_tol;
  double abs_tol = QuadratureSpec{}.abs_tol;
  int max_refinements = QuadratureSpec{}.max_refinements;

  void attach(CLI::App* app) {
    app->add_option("--rel-tol", rel_tol, "Relative quadrature tolerance")->capture_default_str();
    app->add_option("--abs-tol", abs_tol, "Absolute quadrature tolerance")->capture_default_str();
    app->add_option("--max-refinements", max_refinements, "Maximum halvings per panel")->capture_default_str();
  }

  QuadratureSpec spec() const {
    QuadratureSpec s;
    s.rel_tol = rel_tol;
    s.abs_tol = abs_tol;
    s.max_refinements = max_refinements;
    try {
      validate(s);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return s;
  }
};

struct PointOptions {
  std::optional<double> gamma;
  std::optional<double> h;
  bool ground = false;
  std::optional<double> temperature;
  std::vector<double> quench;
  std::string format = "json";
  QuadOptions quad;

  void attach(CLI::App* app) {
    app->add_option("--gamma", gamma, "Anisotropy of the (post-quench) chain");
    app->add_option("--h", h, "Transverse field of the (post-quench) chain");
    app->add_flag("--ground", ground, "Ground state");
    app->add_option("--temperature", temperature, "Gibbs state at temperature T (0 and inf allowed)");
    app->add_option("--quench", quench, "GGE after a quench from (gamma0, h0)")->expected(2)->type_name("G0 H0");
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    quad.attach(app);
  }

  ModelParams params() const {
    if (!gamma || !h) throw UsageError("--gamma and --h are required");
    ModelParams p{*gamma, *h};
    try {
      validate(p);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return p;
  }

  ModeWeight weight(const ModelParams& post) const {
    const int chosen = int(ground) + int(temperature.has_value()) + int(!quench.empty());
    if (chosen != 1) throw UsageError("exactly one of --ground, --temperature, --quench is required");
    if (ground) return ModeWeight::ground_state();
    if (temperature) {
      const double t = *temperature;
      if (std::isnan(t) || t < 0.0) throw UsageError("--temperature must be non-negative");
      if (t == 0.0) return ModeWeight::ground_state();
      return ModeWeight::thermal(t);
    }
    const QuenchSpec q{{quench[0], quench[1]}, post};
    try {
      validate(q);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return ModeWeight::gge(q);
  }
};

void print(std::ostream& out, const OutputRecord& r, const std::string& format) {
  if (format == "csv")
    out << r.csv_header() << '\n' << r.csv_row() << '\n';
  else
    out << r.json() << '\n';
}

double temperature_value(const Temperature& t) {
  if (t.is_zero()) return 0.0;
  if (t.is_infinite()) return std::numeric_limits<double>::infinity();
  return t.value();
}

AxisRange parse_range(const std::string& text, const char* flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw UsageError(fmt::format("{} expects lo:hi:n, got '{}'", flag, text));
  try {
    std::size_t used = 0;
    AxisRange r;
    r.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("lo");
    r.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("hi");
    r.n = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("n");
    return r;
  } catch (const std::logic_error&) {
    throw UsageError(fmt::format("{} expects lo:hi:n, got '{}'", flag, text));
  }
}

double config_real(const CLI::ConfigItem& item) {
  if (item.inputs.size() != 1) throw UsageError(fmt::format("config key {} expects one value", item.fullname()));
  try {
    std::size_t used = 0;
    const double v = std::stod(item.inputs[0], &used);
    if (used != item.inputs[0].size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::logic_error&) {
    throw UsageError(fmt::format("config key {}: '{}' is not a number", item.fullname(), item.inputs[0]));
  }
}

int config_int(const CLI::ConfigItem& item) {
  const double v = config_real(item);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError(fmt::format("config key {} expects an integer", item.fullname()));
  return static_cast<int>(v);
}

AxisRange config_range(const CLI::ConfigItem& item) {
  if (item.inputs.size() == 1) return parse_range(item.inputs[0], item.fullname().c_str());
  if (item.inputs.size() != 3) throw UsageError(fmt::format("config key {} expects [lo, hi, n]", item.fullname()));
  AxisRange r;
  r.lo = config_real({{}, item.name, {item.inputs[0]}});
  r.hi = config_real({{}, item.name, {item.inputs[1]}});
  r.n = config_int({{}, item.name, {item.inputs[2]}});
  return r;
}

/// TOML file mirroring ScanConfig; `threads` is accepted alongside.
void load_config(const std::string& path, ScanConfig& config, std::optional<unsigned>& threads) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot open config '{}'", path));
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw UsageError(fmt::format("{}: {}", path, e.what()));
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    const std::string key = item.fullname();
    if (key == "gamma") {
      config.gamma = config_real(item);
    } else if (key == "gamma0") {
      config.gamma0 = config_real(item);
    } else if (key == "h0_range") {
      config.h0_range = config_range(item);
    } else if (key == "h_range") {
      config.h_range = config_range(item);
    } else if (key == "detection_threshold") {
      config.detection_threshold = config_real(item);
    } else if (key == "threads") {
      const int t = config_int(item);
      if (t < 0) throw UsageError("threads must be non-negative");
      threads = static_cast<unsigned>(t);
    } else if (key == "quadrature.rel_tol") {
      config.quadrature.rel_tol = config_real(item);
    } else if (key == "quadrature.abs_tol") {
      config.quadrature.abs_tol = config_real(item);
    } else if (key == "quadrature.max_refinements") {
      config.quadrature.max_refinements = config_int(item);
    } else if (key == "quadrature.breakpoints") {
      config.quadrature.breakpoints.clear();
      for (const auto& v : item.inputs) {
        if (v.empty()) continue;
        config.quadrature.breakpoints.push_back(config_real({{}, item.name, {v}}));
      }
    } else {
      throw UsageError(fmt::format("{}: unknown config key '{}'", path, key));
    }
  }
}

std::optional<unsigned> env_threads() {
  const char* v = std::getenv("QW_THREADS");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) throw UsageError(fmt::format("QW_THREADS must be a non-negative integer, got '{}'", v));
  return static_cast<unsigned>(n);
}

int cmd_correlators(const PointOptions& o, std::ostream& out) {
  const ModelParams p = o.params();
  const ModeWeight w = o.weight(p);
  print(out, correlator_record(nn_correlators(p, w, o.quad.spec())), o.format);
  return kOk;
}

int cmd_witness(const PointOptions& o, const std::optional<std::string>& from, std::ostream& out) {
  CorrelatorSet c;
  if (from) {
    if (o.gamma || o.h || o.ground || o.temperature || !o.quench.empty())
      throw UsageError("--from-correlators excludes the model and ensemble flags");
    std::vector<double> v;
    std::stringstream ss(*from);
    for (std::string part; std::getline(ss, part, ',');) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(part, &used));
        while (used < part.size() && std::isspace(static_cast<unsigned char>(part[used]))) ++used;
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::logic_error&) {
        throw UsageError(fmt::format("--from-correlators: '{}' is not a number", part));
      }
    }
    if (v.size() != 4) throw UsageError("--from-correlators expects 'sxsx,sysy,szsz,sz'");
    c = CorrelatorSet::from_expectations(v[0], v[1], v[2], v[3]);
  } else {
    const ModelParams p = o.params();
    c = nn_correlators(p, o.weight(p), o.quad.spec());
  }
  print(out, witness_record(analyze(c)), o.format);
  return kOk;
}

struct TthOptions {
  double gamma = 0, h = 0, gamma0 = 0, h0 = 0;
  std::string format = "json";
  QuadOptions quad;
};

int cmd_tth(const TthOptions& o, std::ostream& out) {
  const QuenchSpec q{{o.gamma0, o.h0}, {o.gamma, o.h}};
  try {
    validate(q);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const ThermalizationResult t = thermalization_temperature(q, o.quad.spec());
  OutputRecord r;
  r.add("t_th", temperature_value(t.t_th));
  r.add("lhs", t.lhs).add("rhs", t.rhs).add("residual", t.residual).add("iterations", t.iterations);
  r.add("matched_energy_density", t.matched_energy_density());
  r.add("postquench_energy_density", t.postquench_energy_density());
  print(out, r, o.format);
  return kOk;
}

struct ScanOptionsCli {
  std::optional<std::string> config;
  std::optional<double> gamma;
  std::optional<double> gamma0;
  std::optional<std::string> h0_range;
  std::optional<std::string> h_range;
  std::optional<double> threshold;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  std::optional<std::string> boundary;
  std::optional<unsigned> threads;
  bool quiet = false;
  QuadOptions quad;
  CLI::App* app = nullptr;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError(fmt::format("cannot write '{}'", path));
  f << content;
  if (!f) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

int cmd_scan(const ScanOptionsCli& o, std::ostream& out, std::ostream& err) {
  ScanConfig config;
  std::optional<unsigned> threads;
  if (o.config) load_config(*o.config, config, threads);
  if (o.gamma) config.gamma = *o.gamma;
  if (o.gamma0) config.gamma0 = *o.gamma0;
  if (o.h0_range) config.h0_range = parse_range(*o.h0_range, "--h0-range");
  if (o.h_range) config.h_range = parse_range(*o.h_range, "--h-range");
  if (o.threshold) config.detection_threshold = *o.threshold;
  if (o.app->count("--rel-tol")) config.quadrature.rel_tol = o.quad.rel_tol;
  if (o.app->count("--abs-tol")) config.quadrature.abs_tol = o.quad.abs_tol;
  if (o.app->count("--max-refinements")) config.quadrature.max_refinements = o.quad.max_refinements;
  if (o.threads)
    threads = o.threads;
  else if (!threads)
    threads = env_threads();
  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ScanOptions options;
  options.threads = resolve_threads(threads.value_or(0));
  const std::size_t cols = static_cast<std::size_t>(config.h_range.n);
  const std::size_t rows = static_cast<std::size_t>(config.h0_range.n);
  std::mutex err_mutex;
  if (!o.quiet) {
    options.progress = [&](std::size_t done, std::size_t total) {
      if (done % cols != 0 && done != total) return;
      std::lock_guard lock(err_mutex);
      err << fmt::format("\rscan: {}/{} rows", (done + cols - 1) / cols, rows) << std::flush;
    };
  }
  const auto t0 = std::chrono::steady_clock::now();
  const ScanResult result = run_scan(config, options);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.quiet)
    err << fmt::format("\rscan: {} cells, {} failed, {:.2f} s on {} threads\n", result.cells.size(), result.failed,
                       secs, options.threads);

  std::ostringstream csv;
  write_scan_csv(csv, result);
  if (o.out)
    write_file(*o.out, csv.str());
  else
    out << csv.str();
  if (o.svg) {
    std::ostringstream svg;
    write_region_svg(svg, result);
    write_file(*o.svg, svg.str());
  }
  if (o.boundary) {
    std::ostringstream b;
    b << "detector,ensemble,h0,h,mu\n";
    for (Detector d : {Detector::Mu1, Detector::Mu2})
      for (Ensemble e : {Ensemble::Prethermal, Ensemble::Thermal}) {
        const BoundaryRefinement ref = refine_boundary(result, d, e, 1e-9, options.threads);
        for (const auto& p : ref.points)
          b << to_string(d) << ',' << to_string(e) << ',' << format_real(p.h0) << ',' << format_real(p.h) << ','
            << format_real(p.mu) << '\n';
        if (!o.quiet)
          for (const auto& note : ref.notes) err << fmt::format("boundary {}/{}: {}\n", to_string(d), to_string(e), note);
      }
    write_file(*o.boundary, b.str());
  }
  return kOk;
}

struct OracleOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 20240601;
  int sites = 512;
  std::string format = "json";
};

int cmd_oracle_check(const OracleOptions& o, std::ostream& out) {
  if (o.sites < 8 || o.sites % 2 != 0) throw UsageError("--sites must be even and at least 8");
  const auto eig = check::eigen_check(o.samples, o.seed);
  const auto fs = check::finite_size_check(20, o.seed + 1, o.sites);
  const auto th = check::thermalization_check(100, o.seed + 2);
  const auto kr = check::kernel_check(4096, o.seed + 3);

  OutputRecord r;
  r.add("eigen_samples", static_cast<long long>(eig.samples));
  r.add("eigen_max_deviation", eig.max_deviation);
  r.add("pt_lowest_eigenvalue", eig.lowest).add("pt_highest_eigenvalue", eig.highest);
  r.add("pt_max_negative_count", static_cast<long long>(eig.max_negative));
  r.add("finite_chain_sites", fs.sites);
  r.add("finite_chain_max_error", fs.max_error);
  r.add("finite_chain_min_ratio", fs.min_ratio);
  r.add("tth_max_residual", th.max_residual);
  r.add("tth_monotonicity_violations", static_cast<long long>(th.monotonicity_violations));
  r.add("tth_failures", static_cast<long long>(th.failures));
  for (const auto& k : kr)
    r.add(fmt::format("kernel_{}_max_rel_deviation", kernels::isa_name(k.isa)), k.max_relative_deviation);
  print(out, r, o.format);

  bool ok = eig.failures == 0 && eig.max_deviation <= 1e-10 && eig.lowest >= -0.5 && eig.highest <= 1.0 &&
            eig.max_negative <= 1 && fs.max_error <= 1e-3 && fs.ratio_violations == 0 && th.max_residual < 1e-10 &&
            th.monotonicity_violations == 0 && th.failures == 0;
  for (const auto& k : kr) ok = ok && k.max_relative_deviation <= 1e-12;
  return ok ? kOk : kNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Postquench XY chain: GGE and thermal correlators, entanglement witnesses, phase scans", "xyquench"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");

  PointOptions corr;
  auto* c_corr = app.add_subcommand("correlators", "Nearest-neighbour correlators");
  corr.attach(c_corr);

  PointOptions wit;
  std::optional<std::string> from;
  auto* c_wit = app.add_subcommand("witness", "Partial-transpose witnesses mu1, mu2 and negativity");
  wit.attach(c_wit);
  c_wit->add_option("--from-correlators", from, "Synthetic input 'sxsx,sysy,szsz,sz'");

  TthOptions tth;
  auto* c_tth = app.add_subcommand("tth", "Thermalization temperature of a quench");
  c_tth->add_option("--gamma", tth.gamma, "Post-quench anisotropy")->required();
  c_tth->add_option("--h", tth.h, "Post-quench field")->required();
  c_tth->add_option("--gamma0", tth.gamma0, "Pre-quench anisotropy")->required();
  c_tth->add_option("--h0", tth.h0, "Pre-quench field")->required();
  c_tth->add_option("--format", tth.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  tth.quad.attach(c_tth);

  ScanOptionsCli scan;
  auto* c_scan = app.add_subcommand("scan", "Classify the (h0, h) quench plane");
  scan.app = c_scan;
  c_scan->add_option("--config", scan.config, "TOML file with ScanConfig fields");
  c_scan->add_option("--gamma", scan.gamma, "Post-quench anisotropy");
  c_scan->add_option("--gamma0", scan.gamma0, "Pre-quench anisotropy (default: gamma)");
  c_scan->add_option("--h0-range", scan.h0_range, "Pre-quench fields lo:hi:n");
  c_scan->add_option("--h-range", scan.h_range, "Post-quench fields lo:hi:n");
  c_scan->add_option("--threshold", scan.threshold, "Detection threshold (non-positive)");
  c_scan->add_option("--out", scan.out, "CSV path (default: standard output)");
  c_scan->add_option("--svg", scan.svg, "Region map SVG path");
  c_scan->add_option("--boundary", scan.boundary, "Refined boundary points CSV path");
  c_scan->add_option("--threads", scan.threads, "Worker threads (default: QW_THREADS, then all cores)");
  c_scan->add_flag("--quiet", scan.quiet, "No progress on standard error");
  scan.quad.attach(c_scan);

  OracleOptions orc;
  auto* c_orc = app.add_subcommand("oracle-check", "Cross-check against the finite-chain and Jacobi oracles");
  c_orc->add_option("--samples", orc.samples, "Random correlator sets for the eigenvalue check")->capture_default_str();
  c_orc->add_option("--seed", orc.seed, "Random seed")->capture_default_str();
  c_orc->add_option("--sites", orc.sites, "Finite chain length L (2L is also used)")->capture_default_str();
  c_orc->add_option("--format", orc.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "xyquench: " << e.what() << '\n';
    if (const auto subs = app.get_subcommands(); !subs.empty()) err << "Run with " << subs.front()->get_name() << " --help for usage.\n";
    return kUsage;
  }

  try {
    if (c_corr->parsed()) return cmd_correlators(corr, out);
    if (c_wit->parsed()) return cmd_witness(wit, from, out);
    if (c_tth->parsed()) return cmd_tth(tth, out);
    if (c_scan->parsed()) return cmd_scan(scan, out, err);
    if (c_orc->parsed()) return cmd_oracle_check(orc, out);
  } catch (const UsageError& e) {
    err << "xyquench: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "xyquench: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "xyquench: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace xyq::cli
