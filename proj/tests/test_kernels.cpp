#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "checks.hpp"
#include "xyquench/kernels.hpp"

using namespace xyq;
using namespace xyq::kernels;

namespace {

struct Nodes {
  std::vector<double> c, s, w;
};

Nodes random_nodes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> up(0.0, std::numbers::pi), uw(0.0, 1.0);
  Nodes out;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = up(rng);
    out.c.push_back(std::cos(p));
    out.s.push_back(std::sin(p));
    out.w.push_back(uw(rng));
  }
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("scalar kernel against direct formulas") {
  const Nodes nd = random_nodes(37, 1);
  ModeParams mp;
  mp.gamma = 0.4;
  mp.h = 1.3;
  mp.half_beta = 0.7;
  mp.kind = WeightKind::Thermal;
  ModeSums want;
  for (std::size_t i = 0; i < nd.c.size(); ++i) {
    const double c = nd.c[i], s = nd.s[i], q = nd.w[i];
    const double d = mp.h - c;
    const double e = 2 * std::sqrt(mp.gamma * mp.gamma * s * s + d * d);
    const double w = std::tanh(mp.half_beta * e);
    want.gc += -c * d * w * q / e;
    want.gs += mp.gamma * s * s * w * q / e;
    want.g0 += d * w * q / e;
    want.energy += e * w * q;
    want.signed_energy += e * w * q;
  }
  const ModeSums got = accumulate_with(Isa::Scalar, mp, nd.c.data(), nd.s.data(), nd.w.data(), nd.c.size());
  CHECK(rel(got.gc, want.gc) < 1e-14);
  CHECK(rel(got.gs, want.gs) < 1e-14);
  CHECK(rel(got.g0, want.g0) < 1e-14);
  CHECK(rel(got.energy, want.energy) < 1e-14);
  CHECK(rel(got.signed_energy, want.signed_energy) < 1e-14);
}

TEST_CASE("gge signed weight keeps the sign of cos_delta") {
  // (1, 0) -> (1, 2) at p = 0: cos_delta = -1
  const double c = 1.0, s = 0.0, q = 1.0;
  ModeParams mp{1.0, 2.0, 1.0, 0.0, 0.0, WeightKind::Gge};
  const ModeSums m = accumulate_with(Isa::Scalar, mp, &c, &s, &q, 1);
  CHECK(m.energy == doctest::Approx(2.0));
  CHECK(m.signed_energy == doctest::Approx(-2.0));
}

TEST_CASE("degenerate nodes contribute nothing") {
  const double c[] = {1.0, 0.0}, s[] = {0.0, 1.0}, q[] = {1.0, 1.0};
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (!isa_available(isa)) continue;
    CAPTURE(isa_name(isa));
    ModeParams mp{1.0, 1.0, 1.0, 0.0, 0.0, WeightKind::Gge};  // e = 0 at p = 0
    const ModeSums m = accumulate_with(isa, mp, c, s, q, 2);
    CHECK(std::isfinite(m.gc));
    CHECK(std::isfinite(m.energy));
    const ModeSums one = accumulate_with(isa, mp, c + 1, s + 1, q + 1, 1);
    CHECK(m.gc == doctest::Approx(one.gc).epsilon(1e-15));
    CHECK(m.energy == doctest::Approx(one.energy).epsilon(1e-15));
  }
}

TEST_CASE("simd variants agree with the scalar reference") {
  const auto reports = check::kernel_check(4099, 7);
  for (const auto& r : reports) {
    CAPTURE(isa_name(r.isa));
    CHECK(r.max_relative_deviation < 1e-12);
  }
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u}) {
    const Nodes nd = random_nodes(n, 100 + n);
    for (WeightKind k : {WeightKind::Ground, WeightKind::Thermal, WeightKind::Gge}) {
      ModeParams mp{0.6, 0.9, 0.2, 1.7, 3.0, k};
      const ModeSums ref = accumulate_with(Isa::Scalar, mp, nd.c.data(), nd.s.data(), nd.w.data(), n);
      for (Isa isa : {Isa::Avx2, Isa::Neon}) {
        if (!isa_available(isa)) continue;
        const ModeSums got = accumulate_with(isa, mp, nd.c.data(), nd.s.data(), nd.w.data(), n);
        CHECK(rel(got.gc, ref.gc) < 1e-13);
        CHECK(rel(got.gs, ref.gs) < 1e-13);
        CHECK(rel(got.g0, ref.g0) < 1e-13);
        CHECK(rel(got.energy, ref.energy) < 1e-13);
        CHECK(rel(got.signed_energy, ref.signed_energy) < 1e-13);
        CHECK(rel(accumulate_energy_with(isa, mp, nd.c.data(), nd.s.data(), nd.w.data(), n), ref.energy) < 1e-13);
      }
    }
  }
}

TEST_CASE("thermal weight saturation and tiny arguments") {
  // half_beta spanning tanh's linear, transition and saturated regions
  const Nodes nd = random_nodes(257, 11);
  for (double hb : {1e-9, 1e-3, 0.3, 0.6, 2.0, 40.0, 1e6}) {
    ModeParams mp{0.9, 0.2, 0.0, 0.0, hb, WeightKind::Thermal};
    const ModeSums ref = accumulate_with(Isa::Scalar, mp, nd.c.data(), nd.s.data(), nd.w.data(), nd.c.size());
    for (Isa isa : {Isa::Avx2, Isa::Neon}) {
      if (!isa_available(isa)) continue;
      CAPTURE(hb);
      const ModeSums got = accumulate_with(isa, mp, nd.c.data(), nd.s.data(), nd.w.data(), nd.c.size());
      CHECK(std::abs(got.energy - ref.energy) <= 1e-14 * std::max(1.0, std::abs(ref.energy)) + 1e-300);
      CHECK(std::abs(got.gc - ref.gc) <= 1e-14 * std::max(1.0, std::abs(ref.gc)) + 1e-300);
    }
  }
}

TEST_CASE("dispatch") {
  CHECK(isa_available(Isa::Scalar));
  const Isa before = active_isa();
  set_active_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  set_active_isa(before);
  if (!isa_available(Isa::Neon)) CHECK_THROWS_AS(set_active_isa(Isa::Neon), std::invalid_argument);
  CHECK(isa_name(Isa::Avx2) == "avx2");
}
