#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "xyquench/entanglement.hpp"
#include "xyquench/mode_integrals.hpp"
#include "xyquench/oracle.hpp"
#include "xyquench/spectrum.hpp"

namespace xyq::check {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ModelParams random_params(std::mt19937_64& rng, bool gapped) {
  for (;;) {
    ModelParams p{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 2.0)};
    if (!gapped || is_gapped(p, 0.05)) return p;
  }
}

double max_component_error(const CorrelatorSet& a, const CorrelatorSet& b) {
  return std::max({std::abs(a.g_c - b.g_c), std::abs(a.g_s - b.g_s), std::abs(a.g_0 - b.g_0),
                   std::abs(a.sxsx - b.sxsx), std::abs(a.sysy - b.sysy), std::abs(a.szsz - b.szsz),
                   std::abs(a.sz - b.sz)});
}

// Smallest and largest single-mode energy.
std::pair<double, double> energy_band(const ModelParams& m) {
  std::vector<double> ps = dispersion_minima(m);
  ps.push_back(0.0);
  ps.push_back(3.141592653589793);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double p : ps) lo = std::min(lo, dispersion(m, p));
  for (int i = 0; i <= 256; ++i) hi = std::max(hi, dispersion(m, 3.141592653589793 * i / 256));
  return {lo, hi};
}

}  // namespace

bool is_gapped(const ModelParams& p, double margin) {
  if (std::abs(std::abs(p.h) - 1.0) < margin) return false;
  if (std::abs(p.gamma) < margin && std::abs(p.h) < 1.0 + margin) return false;
  return true;
}

Sample random_sample(std::mt19937_64& rng, bool gapped) {
  const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
  if (kind == 2) {
    const ModelParams pre = random_params(rng, true);
    const ModelParams post = random_params(rng, true);
    return {post, ModeWeight::gge({pre, post})};
  }
  const ModelParams params = random_params(rng, gapped);
  if (kind == 0) return {params, ModeWeight::ground_state()};
  return {params, ModeWeight::thermal(uniform(rng, 0.05, 5.0))};
}

EigenReport eigen_check(std::size_t samples, std::uint64_t seed, const QuadratureSpec& spec) {
  std::mt19937_64 rng(seed);
  EigenReport r;
  r.lowest = 1.0;
  r.highest = -1.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const Sample s = random_sample(rng, false);
    CorrelatorSet c;
    try {
      c = nn_correlators(s.params, s.weight, spec);
    } catch (const std::exception&) {
      ++r.failures;
      continue;
    }
    const auto eig = oracle::symmetric_eigenvalues(partial_transpose(reduced_density_matrix(c)));
    const double closed = std::min(mu_min_1(c), mu_min_2(c));
    r.max_deviation = std::max(r.max_deviation, std::abs(closed - eig.front()));
    r.lowest = std::min(r.lowest, eig.front());
    r.highest = std::max(r.highest, eig.back());
    const auto neg = static_cast<std::size_t>(std::count_if(eig.begin(), eig.end(), [](double x) { return x < 0.0; }));
    r.max_negative = std::max(r.max_negative, neg);
    ++r.samples;
  }
  return r;
}

FiniteSizeReport finite_size_check(std::size_t samples, std::uint64_t seed, int sites, double floor,
                                   const QuadratureSpec& spec) {
  std::mt19937_64 rng(seed);
  FiniteSizeReport r;
  r.sites = sites;
  r.floor = floor;
  r.min_ratio = std::numeric_limits<double>::infinity();
  while (r.samples < samples) {
    const Sample s = random_sample(rng, true);
    const CorrelatorSet exact = nn_correlators(s.params, s.weight, spec);
    const double e1 = max_component_error(oracle::finite_chain_correlators(s.params, s.weight, {sites}), exact);
    const double e2 = max_component_error(oracle::finite_chain_correlators(s.params, s.weight, {2 * sites}), exact);
    r.max_error = std::max(r.max_error, e1);
    if (e2 <= floor) {
      ++r.below_floor;
    } else {
      const double ratio = e1 / e2;
      r.min_ratio = std::min(r.min_ratio, ratio);
      if (ratio < 1.0) ++r.ratio_violations;
    }
    ++r.samples;
  }
  return r;
}

ThermalizationReport thermalization_check(std::size_t samples, std::uint64_t seed, int grid_points,
                                          const QuadratureSpec& spec) {
  std::mt19937_64 rng(seed);
  ThermalizationReport r;
  QuadratureSpec tight = spec;
  tight.rel_tol = std::min(spec.rel_tol, ThermalizationLimits::kQuadratureRelTol);
  for (std::size_t k = 0; k < samples; ++k) {
    const QuenchSpec q{random_params(rng, true), random_params(rng, true)};
    try {
      const ThermalizationResult t = thermalization_temperature(q, spec);
      // Recompute both sides on the thermal weight's own panels.
      const double rhs = thermal_energy_integral(q.post, t.t_th, tight);
      const double full = thermal_energy_integral(q.post, Temperature::zero(), tight);
      r.max_residual = std::max(r.max_residual, std::abs(rhs - t.lhs) / full);

      // Grid from a tenth of the gap, below which R(T) equals R(0) in double
      // precision, to ten times the band top.
      const auto [gap, top] = energy_band(q.post);
      const double a = std::log10(gap / 10), b = std::log10(10 * top);
      ModeIntegrator integ(q.post, ModeWeight::ground_state(), tight);
      double prev = std::numeric_limits<double>::infinity();
      for (int i = 0; i < grid_points; ++i) {
        const double temp = std::pow(10.0, a + (b - a) * i / (grid_points - 1));
        const double v = integ.energy_integral(ModeWeight::thermal(temp));
        if (!(v < prev)) ++r.monotonicity_violations;
        prev = v;
      }
      ++r.samples;
    } catch (const std::exception& e) {
      ++r.failures;
      r.messages.push_back(fmt::format("({}, {}) -> ({}, {}): {}", q.pre.gamma, q.pre.h, q.post.gamma, q.post.h,
                                       e.what()));
    }
  }
  return r;
}

std::vector<KernelReport> kernel_check(std::size_t nodes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> c(nodes), s(nodes), w(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double p = uniform(rng, 0.0, 3.141592653589793);
    c[i] = std::cos(p);
    s[i] = std::sin(p);
    w[i] = uniform(rng, 0.0, 1e-2);
  }
  using kernels::Isa;
  using kernels::ModeSums;
  using kernels::WeightKind;
  std::vector<kernels::ModeParams> cases;
  for (int k = 0; k < 24; ++k) {
    kernels::ModeParams mp;
    mp.gamma = uniform(rng, 0.0, 1.0);
    mp.h = uniform(rng, 0.0, 2.0);
    mp.gamma0 = uniform(rng, 0.0, 1.0);
    mp.h0 = uniform(rng, 0.0, 2.0);
    mp.half_beta = 0.5 / uniform(rng, 0.01, 10.0);
    mp.kind = static_cast<WeightKind>(k % 3);
    cases.push_back(mp);
  }
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };

  std::vector<KernelReport> out;
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (!kernels::isa_available(isa)) continue;
    KernelReport r{isa, nodes, 0.0};
    for (const auto& mp : cases) {
      const ModeSums a = kernels::accumulate_with(isa, mp, c.data(), s.data(), w.data(), nodes);
      const ModeSums b = kernels::accumulate_with(Isa::Scalar, mp, c.data(), s.data(), w.data(), nodes);
      const double ea = kernels::accumulate_energy_with(isa, mp, c.data(), s.data(), w.data(), nodes);
      const double eb = kernels::accumulate_energy_with(Isa::Scalar, mp, c.data(), s.data(), w.data(), nodes);
      r.max_relative_deviation =
          std::max({r.max_relative_deviation, rel(a.gc, b.gc), rel(a.gs, b.gs), rel(a.g0, b.g0),
                    rel(a.energy, b.energy), rel(a.signed_energy, b.signed_energy), rel(ea, eb)});
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace xyq::check
