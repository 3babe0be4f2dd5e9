#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "reference.hpp"
#include "xyquench/correlators.hpp"
#include "xyquench/mode_integrals.hpp"
#include "xyquench/spectrum.hpp"

using namespace xyq;

TEST_CASE("ising h = 0 ground state") {
  const auto g = g_functions({1, 0}, ModeWeight::ground_state());
  CHECK(g.g_c == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(g.g_s == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(std::abs(g.g_0) < 1e-13);
  const auto c = nn_correlators({1, 0}, ModeWeight::ground_state());
  CHECK(c.sxsx == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(c.sysy) < 1e-13);
  CHECK(std::abs(c.szsz) < 1e-13);
  CHECK(std::abs(c.sz) < 1e-13);
}

TEST_CASE("infinite temperature") {
  const auto c = nn_correlators({1, 0}, ModeWeight::thermal(Temperature::infinite()));
  CHECK(c.g_c == 0.0);
  CHECK(c.szsz == 0.0);
  const auto d = nn_correlators({0.4, 0.7}, ModeWeight::thermal(1e12));
  for (double v : {d.g_c, d.g_s, d.g_0, d.sxsx, d.sysy, d.szsz, d.sz}) CHECK(std::abs(v) < 1e-11);
}

TEST_CASE("ground state (0.5, 0.5) against the fine-grid oracle") {
  const auto g = g_functions({0.5, 0.5}, ModeWeight::ground_state());
  CHECK(g.g_c == doctest::Approx(ref::kGroundGc).epsilon(1e-12));
  CHECK(g.g_s == doctest::Approx(ref::kGroundGs).epsilon(1e-12));
  CHECK(g.g_0 == doctest::Approx(ref::kGroundG0).epsilon(1e-12));
}

TEST_CASE("gge and matched thermal state of (1,0) -> (1,2)") {
  const QuenchSpec q{{1, 0}, {1, 2}};
  const auto pre = g_functions(q.post, ModeWeight::gge(q));
  CHECK(std::abs(pre.g_c - ref::kGgeGc) < 1e-10);
  CHECK(std::abs(pre.g_s - ref::kGgeGs) < 1e-10);
  CHECK(std::abs(pre.g_0 - ref::kGgeG0) < 1e-10);
  const auto th = g_functions(q.post, ModeWeight::thermal(ref::kTth));
  CHECK(std::abs(th.g_c - ref::kThGc) < 1e-8);
  CHECK(std::abs(th.g_s - ref::kThGs) < 1e-8);
  CHECK(std::abs(th.g_0 - ref::kThG0) < 1e-8);
}

TEST_CASE("disorder line factorizes") {
  for (double gamma : {0.2, 0.5, 0.6, 0.8}) {
    const auto c = nn_correlators({gamma, disorder_field(gamma)}, ModeWeight::ground_state());
    CHECK(std::abs(c.szsz - c.sz * c.sz) < 1e-8);
  }
}

TEST_CASE("strong field") {
  // first order in 1/h: sxsx = -sysy = gamma / 2h
  for (double gamma : {0.0, 0.5, 1.0}) {
    const auto c = nn_correlators({gamma, 50}, ModeWeight::ground_state());
    CHECK(std::abs(c.sz - 1) < 1e-3);
    CHECK(std::abs(c.sxsx - gamma / 100) < 1e-5);
    CHECK(std::abs(c.sysy + gamma / 100) < 1e-5);
    CHECK(std::abs(c.szsz - 1) < 1e-3);
  }
}

TEST_CASE("assembly identities and bounds") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ug(0, 1), uh(0, 2), ut(0.05, 5);
  for (int i = 0; i < 60; ++i) {
    const ModelParams m{ug(rng), uh(rng)};
    const ModeWeight w = i % 3 == 0   ? ModeWeight::ground_state()
                         : i % 3 == 1 ? ModeWeight::thermal(ut(rng))
                                      : ModeWeight::gge({{ug(rng), uh(rng)}, m});
    CorrelatorSet c;
    try {
      c = nn_correlators(m, w);
    } catch (const DegenerateModeError&) {
      continue;
    }
    CHECK(c.sxsx == c.g_c - c.g_s);
    CHECK(c.sysy == c.g_c + c.g_s);
    CHECK(c.szsz == c.g_0 * c.g_0 - c.g_c * c.g_c + c.g_s * c.g_s);
    CHECK(c.sz == c.g_0);
    for (double v : {c.g_c, c.g_s, c.g_0, c.sxsx, c.sysy, c.szsz, c.sz}) CHECK(std::abs(v) <= 1.0 + 1e-12);
  }
}

TEST_CASE("trivial quench reproduces the ground state") {
  for (const ModelParams m : {ModelParams{0.3, 0.4}, ModelParams{1, 1.7}, ModelParams{0.8, 0.1}}) {
    const auto a = nn_correlators(m, ModeWeight::gge({m, m}));
    const auto b = nn_correlators(m, ModeWeight::ground_state());
    CHECK(std::abs(a.sxsx - b.sxsx) < 1e-10);
    CHECK(std::abs(a.sysy - b.sysy) < 1e-10);
    CHECK(std::abs(a.szsz - b.szsz) < 1e-10);
    CHECK(std::abs(a.sz - b.sz) < 1e-10);
  }
}

TEST_CASE("critical and gapless parameters integrate") {
  // gapless momenta become panel ends; the integrands stay bounded
  CHECK_NOTHROW(nn_correlators({1, 1}, ModeWeight::ground_state()));
  CHECK_NOTHROW(nn_correlators({0, 0.5}, ModeWeight::ground_state()));
  const auto c = nn_correlators({1, 1}, ModeWeight::ground_state());
  // critical Ising chain: <sigma^z> = 2 / pi
  CHECK(c.sz == doctest::Approx(2 / 3.141592653589793).epsilon(1e-10));
}

TEST_CASE("mode cuts include kinks") {
  const QuenchSpec q{{1, 0}, {1, 2}};
  const auto cuts = mode_cuts(q.post, ModeWeight::gge(q));
  const auto roots = cos_delta_roots(q);
  for (double r : roots) {
    bool found = false;
    for (double c : cuts) found = found || std::abs(c - r) < 1e-14;
    CHECK(found);
  }
  CHECK(cuts.front() == 0.0);
}

TEST_CASE("correlators from expectations") {
  const auto c = CorrelatorSet::from_expectations(1, 0, 0, 0);
  CHECK(c.g_c == 0.5);
  CHECK(c.g_s == -0.5);
  CHECK(c.sxsx == 1);
  CHECK(c.szsz == 0);
}
