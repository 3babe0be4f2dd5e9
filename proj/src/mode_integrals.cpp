#include "xyquench/mode_integrals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "xyquench/spectrum.hpp"

namespace xyq {
namespace {

constexpr double kPi = std::numbers::pi;

void append_folded(std::vector<double>& out, const std::vector<double>& ps) {
  for (double p : ps) out.push_back(std::abs(p));
}

}  // namespace

std::vector<double> mode_cuts(const ModelParams& params, const ModeWeight& w,
                              const std::vector<double>& user_breakpoints) {
  std::vector<double> pts;
  append_folded(pts, user_breakpoints);
  append_folded(pts, gapless_momenta(params));
  append_folded(pts, dispersion_minima(params));
  if (w.kind() == ModeWeight::Kind::Gge && !w.quench().is_trivial()) {
    append_folded(pts, gapless_momenta(w.quench().pre));
    append_folded(pts, dispersion_minima(w.quench().pre));
    append_folded(pts, cos_delta_roots(w.quench()));
  }
  return merge_cuts(0.0, kPi, std::move(pts));
}

kernels::ModeParams kernel_params(const ModelParams& params, const ModeWeight& w) {
  kernels::ModeParams mp;
  mp.gamma = params.gamma;
  mp.h = params.h;
  switch (w.kind()) {
    case ModeWeight::Kind::GroundState:
      mp.kind = kernels::WeightKind::Ground;
      break;
    case ModeWeight::Kind::Thermal:
      mp.kind = kernels::WeightKind::Thermal;
      mp.half_beta = w.half_beta();
      break;
    case ModeWeight::Kind::Gge:
      if (w.quench().post != params) {
        throw std::invalid_argument("GGE weight belongs to different post-quench parameters");
      }
      if (w.quench().is_trivial()) {
        mp.kind = kernels::WeightKind::Ground;
      } else {
        mp.kind = kernels::WeightKind::Gge;
        mp.gamma0 = w.quench().pre.gamma;
        mp.h0 = w.quench().pre.h;
      }
      break;
  }
  return mp;
}

ModeIntegrator::ModeIntegrator(const ModelParams& params, const ModeWeight& cut_weight, const QuadratureSpec& spec)
    : params_(params), spec_(spec), grid_((validate(spec), mode_cuts(params, cut_weight, spec.breakpoints)), spec) {
  validate(params);
}

kernels::ModeSums ModeIntegrator::moments(const ModeWeight& w) {
  const kernels::ModeParams mp = kernel_params(params_, w);
  const auto r = grid_.integrate<5>([&](const NodeLevel& lv) {
    const kernels::ModeSums s =
        kernels::accumulate(mp, lv.cos_p.data(), lv.sin_p.data(), lv.jacobian.data(), lv.size());
    return std::array<double, 5>{s.gc, s.gs, s.g0, s.energy, s.signed_energy};
  });
  return {2.0 * r[0], 2.0 * r[1], 2.0 * r[2], 2.0 * r[3], 2.0 * r[4]};
}

double ModeIntegrator::energy_integral(const ModeWeight& w) { return energy_integral(w, spec_.rel_tol, spec_.abs_tol); }

double ModeIntegrator::energy_integral(const ModeWeight& w, double rel_tol, double abs_tol) {
  const kernels::ModeParams mp = kernel_params(params_, w);
  const auto r = grid_.integrate<1>(
      [&](const NodeLevel& lv) {
        return std::array<double, 1>{
            kernels::accumulate_energy(mp, lv.cos_p.data(), lv.sin_p.data(), lv.jacobian.data(), lv.size())};
      },
      rel_tol, abs_tol);
  return 2.0 * r[0];
}

}  // namespace xyq
