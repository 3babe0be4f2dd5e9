#include "xyquench/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "xyquench/correlators.hpp"
#include "xyquench/mode_integrals.hpp"

namespace xyq {

std::vector<double> AxisRange::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(n, 1)));
  if (n <= 1) {
    v[0] = lo;
    return v;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = lo + step * i;
  v.back() = hi;
  return v;
}

void validate(const ScanConfig& c) {
  auto check_axis = [](const AxisRange& a, const char* name) {
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi))
      throw std::invalid_argument(fmt::format("{} range must be finite", name));
    if (a.n < 2) throw std::invalid_argument(fmt::format("{} range needs at least two points", name));
    if (!(a.hi > a.lo)) throw std::invalid_argument(fmt::format("{} range needs lo < hi", name));
  };
  if (!std::isfinite(c.gamma) || !std::isfinite(c.pre_gamma()))
    throw std::invalid_argument("anisotropy must be finite");
  check_axis(c.h0_range, "h0");
  check_axis(c.h_range, "h");
  validate(c.quadrature);
  if (!std::isfinite(c.detection_threshold) || c.detection_threshold > 0.0)
    throw std::invalid_argument("detection threshold must be finite and non-positive");
}

CellResult evaluate_cell(const QuenchSpec& quench, const QuadratureSpec& spec, double threshold) {
  CellResult r;
  r.h0 = quench.pre.h;
  r.h = quench.post.h;
  try {
    validate(quench);
    const ModeWeight gge = ModeWeight::gge(quench);
    ModeIntegrator integ(quench.post, gge, spec);
    const CorrelatorSet pre = CorrelatorSet::from_g(g_from_moments(integ.moments(gge)));

    const double rel = std::min(spec.rel_tol, ThermalizationLimits::kQuadratureRelTol);
    const double lhs = integ.energy_integral(gge, rel, spec.abs_tol);
    r.t_th = solve_thermalization_temperature(integ, lhs).t_th;

    const ModeWeight th = ModeWeight::thermal(r.t_th);
    const CorrelatorSet post = CorrelatorSet::from_g(g_from_moments(integ.moments(th)));
    r.prethermal = analyze(pre, threshold);
    r.thermal = analyze(post, threshold);
  } catch (const std::exception& e) {
    r.error = e.what();
    if (r.error.empty()) r.error = "evaluation failed";
  }
  return r;
}

std::string_view to_string(Detector d) { return d == Detector::Mu1 ? "mu1" : "mu2"; }
std::string_view to_string(Ensemble e) { return e == Ensemble::Prethermal ? "prethermal" : "thermal"; }

std::string_view to_string(Region r) {
  switch (r) {
    case Region::Neither: return "neither";
    case Region::PrethermalOnly: return "prethermal";
    case Region::ThermalOnly: return "thermal";
    case Region::Both: return "both";
    case Region::Invalid: return "invalid";
  }
  return "invalid";
}

std::optional<Region> parse_region(std::string_view s) {
  for (Region r : {Region::Neither, Region::PrethermalOnly, Region::ThermalOnly, Region::Both, Region::Invalid})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

double detector_value(const WitnessReport& report, Detector d) {
  return d == Detector::Mu1 ? report.mu1 : report.mu2;
}

Region classify(const CellResult& cell, Detector d, double threshold) {
  if (!cell.ok()) return Region::Invalid;
  const bool pre = detector_value(cell.prethermal, d) < threshold;
  const bool th = detector_value(cell.thermal, d) < threshold;
  if (pre && th) return Region::Both;
  if (pre) return Region::PrethermalOnly;
  if (th) return Region::ThermalOnly;
  return Region::Neither;
}

RegionMap build_region_map(const std::vector<CellResult>& cells, std::size_t rows, std::size_t cols, Detector d,
                           double threshold) {
  if (cells.size() != rows * cols) throw std::invalid_argument("region map shape does not match cell count");
  RegionMap m{d, rows, cols, {}};
  m.cells.reserve(cells.size());
  for (const auto& c : cells) m.cells.push_back(classify(c, d, threshold));
  return m;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto body = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
}

ScanResult run_scan(const ScanConfig& config, const ScanOptions& options) {
  validate(config);
  ScanResult out;
  out.config = config;
  out.h0_values = config.h0_range.values();
  out.h_values = config.h_range.values();
  const std::size_t rows = out.h0_values.size();
  const std::size_t cols = out.h_values.size();
  const std::size_t total = rows * cols;
  out.cells.resize(total);

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (options.shuffle_seed) {
    std::mt19937_64 rng(*options.shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }

  std::atomic<std::size_t> done{0};
  parallel_for(total, options.threads, [&](std::size_t k) {
    const std::size_t idx = order[k];
    const QuenchSpec q{{config.pre_gamma(), out.h0_values[idx / cols]}, {config.gamma, out.h_values[idx % cols]}};
    out.cells[idx] = evaluate_cell(q, config.quadrature, config.detection_threshold);
    const std::size_t n = done.fetch_add(1, std::memory_order_relaxed) + 1;
    if (options.progress) options.progress(n, total);
  });

  out.failed = static_cast<std::size_t>(std::count_if(out.cells.begin(), out.cells.end(),
                                                      [](const CellResult& c) { return !c.ok(); }));
  out.mu1_map = build_region_map(out.cells, rows, cols, Detector::Mu1, config.detection_threshold);
  out.mu2_map = build_region_map(out.cells, rows, cols, Detector::Mu2, config.detection_threshold);
  return out;
}

namespace {

struct Edge {
  std::size_t a;  // flat cell indices
  std::size_t b;
};

struct EdgeOutcome {
  std::optional<BoundaryPoint> point;
  std::string note;
};

EdgeOutcome bisect_edge(double h0a, double ha, double h0b, double hb, double mua, const DetectorFunction& mu,
                        double threshold, double tol) {
  // Parametrise the edge by s in [0, 1]; keep `lo` on the side of endpoint a.
  const bool a_detected = mua < threshold;
  double lo = 0.0;
  double hi = 1.0;
  auto at = [&](double s) { return std::pair{h0a + (h0b - h0a) * s, ha + (hb - ha) * s}; };
  for (int it = 0; it < 200; ++it) {
    const double s = 0.5 * (lo + hi);
    const auto [h0, h] = at(s);
    const double v = mu(h0, h);
    if (!std::isfinite(v)) return {std::nullopt, fmt::format("non-finite detector value at h0={:.17g} h={:.17g}", h0, h)};
    if (std::abs(v) < tol) return {BoundaryPoint{h0, h, v}, {}};
    ((v < threshold) == a_detected ? lo : hi) = s;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon())
      return {std::nullopt,
              fmt::format("detector jumps across h0={:.17g} h={:.17g} without reaching |mu| < {:g}", h0, h, tol)};
  }
  const auto [h0, h] = at(0.5 * (lo + hi));
  return {std::nullopt, fmt::format("bisection did not converge near h0={:.17g} h={:.17g}", h0, h)};
}

}  // namespace

BoundaryRefinement refine_boundary(const ScanResult& grid, Detector d, Ensemble e, const DetectorFunction& mu,
                                   double tol, unsigned threads) {
  BoundaryRefinement out;
  out.detector = d;
  out.ensemble = e;
  const std::size_t rows = grid.h0_values.size();
  const std::size_t cols = grid.h_values.size();
  const double thr = grid.config.detection_threshold;
  auto value = [&](std::size_t idx) {
    const CellResult& c = grid.cells[idx];
    return detector_value(e == Ensemble::Prethermal ? c.prethermal : c.thermal, d);
  };

  std::vector<Edge> edges;
  auto consider = [&](std::size_t a, std::size_t b) {
    const CellResult& ca = grid.cells[a];
    const CellResult& cb = grid.cells[b];
    if (!ca.ok() || !cb.ok()) {
      if (ca.ok() != cb.ok())
        out.notes.push_back(fmt::format("edge ({:.17g},{:.17g})-({:.17g},{:.17g}) touches a failed cell", ca.h0, ca.h,
                                        cb.h0, cb.h));
      return;
    }
    if ((value(a) < thr) != (value(b) < thr)) edges.push_back({a, b});
  };
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t idx = i * cols + j;
      if (j + 1 < cols) consider(idx, idx + 1);
      if (i + 1 < rows) consider(idx, idx + cols);
    }

  std::vector<EdgeOutcome> results(edges.size());
  parallel_for(edges.size(), threads, [&](std::size_t k) {
    const CellResult& ca = grid.cells[edges[k].a];
    const CellResult& cb = grid.cells[edges[k].b];
    results[k] = bisect_edge(ca.h0, ca.h, cb.h0, cb.h, value(edges[k].a), mu, thr, tol);
  });
  for (auto& r : results) {
    if (r.point)
      out.points.push_back(*r.point);
    else
      out.notes.push_back(std::move(r.note));
  }
  return out;
}

BoundaryRefinement refine_boundary(const ScanResult& grid, Detector d, Ensemble e, double tol, unsigned threads) {
  const ScanConfig& c = grid.config;
  DetectorFunction mu = [&c, d, e](double h0, double h) {
    const CellResult r = evaluate_cell({{c.pre_gamma(), h0}, {c.gamma, h}}, c.quadrature, c.detection_threshold);
    if (!r.ok()) return std::numeric_limits<double>::quiet_NaN();
    return detector_value(e == Ensemble::Prethermal ? r.prethermal : r.thermal, d);
  };
  return refine_boundary(grid, d, e, mu, tol, threads);
}

}  // namespace xyq
