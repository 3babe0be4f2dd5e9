#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <atomic>
#include <cstring>
#include <stdexcept>

#include "reference.hpp"
#include "xyquench/correlators.hpp"
#include "xyquench/scan.hpp"
#include "xyquench/spectrum.hpp"

using namespace xyq;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_report(const WitnessReport& a, const WitnessReport& b) {
  return same_bits(a.mu1, b.mu1) && same_bits(a.mu2, b.mu2) && same_bits(a.negativity, b.negativity) &&
         a.detection == b.detection;
}

ScanConfig small_config(double gamma, double lo, double hi, int n) {
  ScanConfig c;
  c.gamma = gamma;
  c.h0_range = {lo, hi, n};
  c.h_range = {lo, hi, n};
  return c;
}

}  // namespace

TEST_CASE("axis values") {
  const auto v = AxisRange{0, 2, 21}.values();
  REQUIRE(v.size() == 21);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 2.0);
  CHECK(v[10] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("config validation") {
  ScanConfig c;
  CHECK_NOTHROW(validate(c));
  c.h_range.n = 1;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = {};
  c.h0_range = {1, 0, 5};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = {};
  c.gamma = NAN;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = {};
  c.detection_threshold = 0.1;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = {};
  c.quadrature.rel_tol = -1;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = {};
  CHECK(c.pre_gamma() == c.gamma);
  c.gamma0 = 0.3;
  CHECK(c.pre_gamma() == 0.3);
}

TEST_CASE("trivial cell collapses onto the ground state") {
  for (const ModelParams m : {ModelParams{1, 0.5}, ModelParams{0.4, 1.6}, ModelParams{0.7, 0.2}}) {
    const CellResult r = evaluate_cell({m, m}, {});
    REQUIRE(r.ok());
    CHECK(r.t_th.is_zero());
    CHECK(same_report(r.prethermal, r.thermal));
    const auto g = analyze(nn_correlators(m, ModeWeight::ground_state()));
    CHECK(r.prethermal.mu1 == doctest::Approx(g.mu1).epsilon(1e-12));
    CHECK(r.prethermal.mu2 == doctest::Approx(g.mu2).epsilon(1e-12));
  }
}

TEST_CASE("disorder line cell is undetected") {
  for (double gamma : {0.3, 0.6, 0.9}) {
    const ModelParams m{gamma, disorder_field(gamma)};
    const CellResult r = evaluate_cell({m, m}, {});
    REQUIRE(r.ok());
    CHECK(r.prethermal.detection == Detection::Undetected);
    CHECK(r.thermal.detection == Detection::Undetected);
    CHECK(r.prethermal.negativity < 1e-8);
  }
}

TEST_CASE("full pipeline for (1,0) -> (1,2)") {
  const CellResult r = evaluate_cell({{1, 0}, {1, 2}}, {});
  REQUIRE(r.ok());
  CHECK(r.t_th.value() == doctest::Approx(ref::kTth).epsilon(1e-8));
  CHECK(std::abs(r.prethermal.mu1 - ref::kGgeMu1) < 1e-10);
  CHECK(std::abs(r.prethermal.mu2 - ref::kGgeMu2) < 1e-10);
  CHECK(std::abs(r.thermal.mu1 - ref::kThMu1) < 1e-8);
  CHECK(std::abs(r.thermal.mu2 - ref::kThMu2) < 1e-8);
  CHECK(r.prethermal.detection == Detection::Undetected);
}

TEST_CASE("cell errors are recorded") {
  const CellResult bad = evaluate_cell({{1, NAN}, {1, 2}}, {});
  CHECK_FALSE(bad.ok());
  QuadratureSpec starved;
  starved.rel_tol = 1e-15;
  starved.abs_tol = 1e-300;
  starved.max_refinements = 3;
  const CellResult r = evaluate_cell({{0.3, 0.2}, {0.5, 1.4}}, starved);
  CHECK_FALSE(r.ok());
  CHECK(classify(r, Detector::Mu1) == Region::Invalid);
}

TEST_CASE("classification") {
  CellResult c;
  c.prethermal.mu1 = -0.1;
  c.thermal.mu1 = 0.1;
  c.prethermal.mu2 = 0.2;
  c.thermal.mu2 = -1e-13;  // above threshold
  CHECK(classify(c, Detector::Mu1) == Region::PrethermalOnly);
  CHECK(classify(c, Detector::Mu2) == Region::Neither);
  c.thermal.mu1 = -0.2;
  CHECK(classify(c, Detector::Mu1) == Region::Both);
  c.prethermal.mu1 = 0.0;
  CHECK(classify(c, Detector::Mu1) == Region::ThermalOnly);
  for (Region r : {Region::Neither, Region::PrethermalOnly, Region::ThermalOnly, Region::Both, Region::Invalid})
    CHECK(parse_region(to_string(r)) == r);
  CHECK_FALSE(parse_region("striped").has_value());
}

TEST_CASE("2x2 grid with trivial diagonal") {
  const ScanResult r = run_scan(small_config(1, 0.5, 1.5, 2), {.threads = 2, .shuffle_seed = {}, .progress = {}});
  REQUIRE(r.cells.size() == 4);
  for (std::size_t i = 0; i < 2; ++i) {
    const CellResult& d = r.at(i, i);
    CHECK(d.t_th.is_zero());
    const CellResult direct = evaluate_cell({{1, d.h0}, {1, d.h}}, {});
    for (Detector det : {Detector::Mu1, Detector::Mu2}) {
      const Region reg = r.map(det).at(i, i);
      CHECK((reg == Region::Neither || reg == Region::Both));
      CHECK(reg == classify(direct, det));
    }
  }
  CHECK(r.at(0, 1).h0 == 0.5);
  CHECK(r.at(0, 1).h == 1.5);
}

TEST_CASE("scan invariants and determinism") {
  const ScanConfig cfg = small_config(0.5, 0.0, 2.0, 9);
  const ScanResult a = run_scan(cfg, {.threads = 1, .shuffle_seed = {}, .progress = {}});
  const ScanResult b = run_scan(cfg, {.threads = 4, .shuffle_seed = 99, .progress = {}});
  REQUIRE(a.cells.size() == b.cells.size());
  CHECK(a.failed == 0);
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    const CellResult& x = a.cells[k];
    const CellResult& y = b.cells[k];
    CHECK(same_bits(x.h0, y.h0));
    CHECK(same_bits(x.h, y.h));
    CHECK(same_report(x.prethermal, y.prethermal));
    CHECK(same_report(x.thermal, y.thermal));
    CHECK(a.mu1_map.cells[k] == b.mu1_map.cells[k]);
    // no cell is detected by both witnesses
    CHECK_FALSE((x.prethermal.mu1 < cfg.detection_threshold && x.prethermal.mu2 < cfg.detection_threshold));
    CHECK_FALSE((x.thermal.mu1 < cfg.detection_threshold && x.thermal.mu2 < cfg.detection_threshold));
    for (Detector d : {Detector::Mu1, Detector::Mu2}) {
      const bool pre = detector_value(x.prethermal, d) < cfg.detection_threshold;
      const bool th = detector_value(x.thermal, d) < cfg.detection_threshold;
      CHECK((a.map(d).cells[k] == Region::Both) == (pre && th));
    }
  }
}

TEST_CASE("h0 <-> h shares cos_delta but not the dispersion") {
  const QuenchSpec q{{0.6, 0.3}, {0.6, 1.4}};
  const QuenchSpec s{q.post, q.pre};
  for (double p : {0.2, 1.0, 2.9}) {
    CHECK(cos_delta(q, p) == cos_delta(s, p));
    CHECK(dispersion(q.post, p) != dispersion(s.post, p));
  }
}

TEST_CASE("progress callback counts every cell") {
  std::atomic<std::size_t> calls{0};
  std::atomic<std::size_t> last{0};
  ScanOptions o;
  o.threads = 3;
  o.progress = [&](std::size_t done, std::size_t total) {
    ++calls;
    CHECK(total == 12);
    std::size_t prev = last.load();
    while (done > prev && !last.compare_exchange_weak(prev, done)) {
    }
  };
  ScanConfig c = small_config(1, 0.2, 0.8, 3);
  c.h_range.n = 4;
  run_scan(c, o);
  CHECK(calls == 12);
  CHECK(last == 12);
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(parallel_for(50, 4,
                               [](std::size_t i) {
                                 if (i == 17) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  std::vector<int> hit(100, 0);
  parallel_for(100, 3, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
}

namespace {

ScanResult synthetic_grid(double root) {
  ScanResult g;
  g.config = small_config(1, 0, 1, 5);
  g.h0_values = {0.0, 1.0};
  g.h_values = AxisRange{0, 1, 5}.values();
  for (double h0 : g.h0_values)
    for (double h : g.h_values) {
      CellResult c;
      c.h0 = h0;
      c.h = h;
      c.prethermal.mu1 = h - root;
      c.prethermal.mu2 = 1;
      c.thermal.mu1 = c.thermal.mu2 = 1;
      g.cells.push_back(c);
    }
  g.mu1_map = build_region_map(g.cells, 2, 5, Detector::Mu1, g.config.detection_threshold);
  g.mu2_map = build_region_map(g.cells, 2, 5, Detector::Mu2, g.config.detection_threshold);
  return g;
}

}  // namespace

TEST_CASE("boundary refinement on a synthetic linear detector") {
  const double root = 0.37;
  const ScanResult g = synthetic_grid(root);
  const auto ref = refine_boundary(g, Detector::Mu1, Ensemble::Prethermal,
                                   [&](double, double h) { return h - root; });
  REQUIRE(ref.points.size() == 2);
  for (const auto& p : ref.points) {
    CHECK(std::abs(p.h - root) < 1e-6);
    CHECK(std::abs(p.mu) < 1e-9);
  }
  CHECK(ref.notes.empty());

  // constant sign: nothing to refine
  const auto none = refine_boundary(g, Detector::Mu2, Ensemble::Prethermal, [](double, double) { return 1.0; });
  CHECK(none.points.empty());
  CHECK(none.notes.empty());

  // a jump instead of a zero crossing is skipped with a note
  const auto jump = refine_boundary(g, Detector::Mu1, Ensemble::Prethermal,
                                    [&](double, double h) { return h < root ? -0.5 : 0.5; });
  CHECK(jump.points.empty());
  CHECK(jump.notes.size() == 2);
}

TEST_CASE("gamma = 1 boundary is reproducible under shuffled evaluation") {
  const ScanConfig cfg = small_config(1, 0, 2, 7);
  const ScanResult a = run_scan(cfg, {.threads = 1, .shuffle_seed = {}, .progress = {}});
  const ScanResult b = run_scan(cfg, {.threads = 2, .shuffle_seed = 5, .progress = {}});
  const auto ra = refine_boundary(a, Detector::Mu2, Ensemble::Thermal);
  const auto rb = refine_boundary(b, Detector::Mu2, Ensemble::Thermal, 1e-9, 2);
  REQUIRE(!ra.points.empty());
  REQUIRE(ra.points.size() == rb.points.size());
  for (std::size_t i = 0; i < ra.points.size(); ++i) {
    CHECK(std::abs(ra.points[i].h0 - rb.points[i].h0) < 1e-6);
    CHECK(std::abs(ra.points[i].h - rb.points[i].h) < 1e-6);
    CHECK(std::abs(ra.points[i].mu) < 1e-9);
  }
}
