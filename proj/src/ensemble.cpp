#include "xyquench/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fmt/format.h"
#include "xyquench/mode_integrals.hpp"
#include "xyquench/spectrum.hpp"

namespace xyq {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Temperature Temperature::infinite() { return Temperature(Kind::Infinite, kInf); }

Temperature Temperature::finite(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("finite temperature must be positive and finite");
  }
  return Temperature(Kind::Finite, value);
}

ModeWeight ModeWeight::ground_state() { return ModeWeight{}; }

ModeWeight ModeWeight::thermal(double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  ModeWeight w;
  w.kind_ = Kind::Thermal;
  w.temperature_ = temperature;
  w.half_beta_ = std::isinf(temperature) ? 0.0 : 0.5 / temperature;
  return w;
}

ModeWeight ModeWeight::thermal(const Temperature& temperature) {
  if (temperature.is_zero()) return ground_state();
  return thermal(temperature.value());
}

ModeWeight ModeWeight::gge(const QuenchSpec& quench) {
  validate(quench);
  ModeWeight w;
  w.kind_ = Kind::Gge;
  w.quench_ = quench;
  return w;
}

std::string ModeWeight::describe() const {
  switch (kind_) {
    case Kind::GroundState:
      return "ground";
    case Kind::Thermal:
      return fmt::format("thermal(T={:.17g})", temperature_);
    case Kind::Gge:
      return fmt::format("gge(gamma0={:.17g}, h0={:.17g})", quench_.pre.gamma, quench_.pre.h);
  }
  return "?";
}

double weight(const ModeWeight& w, const ModelParams& params, double p) {
  switch (w.kind()) {
    case ModeWeight::Kind::GroundState:
      return 1.0;
    case ModeWeight::Kind::Thermal:
      return std::tanh(dispersion(params, p) * w.half_beta());
    case ModeWeight::Kind::Gge:
      if (w.quench().post != params) {
        throw std::invalid_argument("GGE weight belongs to different post-quench parameters");
      }
      return std::abs(cos_delta(w.quench(), p));
  }
  return 0.0;
}

EffectiveTemperature effective_temperature(const QuenchSpec& quench, double p) {
  const double a = std::abs(cos_delta(quench, p));
  if (a >= 1.0) return Temperature::zero();
  if (a == 0.0) return Temperature::infinite();
  return Temperature::finite(dispersion(quench.post, p) / (2.0 * std::atanh(a)));
}

double energy_density(const ModelParams& params, const ModeWeight& w, const QuadratureSpec& spec) {
  ModeIntegrator integ(params, w, spec);
  return -integ.energy_integral(w) / (4.0 * kPi);
}

double energy_density(const SignedQuenchOccupancy& occupancy, const QuadratureSpec& spec) {
  const ModeWeight w = ModeWeight::gge(occupancy.quench);
  ModeIntegrator integ(occupancy.quench.post, w, spec);
  return -integ.moments(w).signed_energy / (4.0 * kPi);
}

double thermal_energy_integral(const ModelParams& params, const Temperature& t, const QuadratureSpec& spec) {
  const ModeWeight w = ModeWeight::thermal(t);
  ModeIntegrator integ(params, w, spec);
  return integ.energy_integral(w);
}

double ThermalizationResult::matched_energy_density() const { return -lhs / (4.0 * kPi); }
double ThermalizationResult::postquench_energy_density() const { return -signed_integral / (4.0 * kPi); }

ThermalizationResult solve_thermalization_temperature(ModeIntegrator& integ, double lhs) {
  using L = ThermalizationLimits;
  const double rel = std::min(integ.spec().rel_tol, L::kQuadratureRelTol);
  const double abs = integ.spec().abs_tol;
  const auto R = [&](double t) { return integ.energy_integral(ModeWeight::thermal(t), rel, abs); };

  ThermalizationResult out;
  out.lhs = lhs;
  out.full = integ.energy_integral(ModeWeight::ground_state(), rel, abs);
  if (!(out.full > 0.0)) throw std::invalid_argument("dispersion integral vanishes");
  if (!(lhs >= 0.0) || lhs > out.full * (1.0 + 1e-9) + abs) {
    throw QuadratureError(fmt::format("energy target {:.17g} outside [0, {:.17g}]", lhs, out.full));
  }

  if (out.full - lhs <= L::kResidual * out.full) {
    out.t_th = Temperature::zero();
    out.rhs = out.full;
    out.residual = std::abs(out.full - lhs) / out.full;
    return out;
  }
  const double r_max = R(L::kMaxTemperature);
  if (lhs <= r_max) {
    out.t_th = Temperature::infinite();
    out.rhs = 0.0;
    out.residual = lhs / out.full;
    return out;
  }

  double lo = std::log(L::kMinTemperature);
  double hi = std::log(L::kMaxTemperature);
  for (int it = 1; it <= L::kMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double t = std::exp(mid);
    const double r = R(t);
    const double res = std::abs(r - lhs) / out.full;
    if (res < L::kResidual) {
      out.t_th = Temperature::finite(t);
      out.rhs = r;
      out.residual = res;
      out.iterations = it;
      return out;
    }
    (r > lhs ? lo : hi) = mid;
  }
  throw QuadratureError("thermalization temperature bisection did not reach the residual target");
}

ThermalizationResult solve_thermalization_temperature(const ModelParams& params, double lhs,
                                                      const QuadratureSpec& spec) {
  ModeIntegrator integ(params, ModeWeight::ground_state(), spec);
  return solve_thermalization_temperature(integ, lhs);
}

ThermalizationResult thermalization_temperature(ModeIntegrator& integ, const QuenchSpec& quench) {
  const ModeWeight gge = ModeWeight::gge(quench);
  const double rel = std::min(integ.spec().rel_tol, ThermalizationLimits::kQuadratureRelTol);
  const double abs = integ.spec().abs_tol;
  double lhs;
  double signed_integral;
  if (quench.is_trivial()) {
    lhs = signed_integral = integ.energy_integral(ModeWeight::ground_state(), rel, abs);
  } else {
    lhs = integ.energy_integral(gge, rel, abs);
    signed_integral = integ.moments(gge).signed_energy;
  }
  ThermalizationResult out = solve_thermalization_temperature(integ, lhs);
  out.signed_integral = signed_integral;
  return out;
}

ThermalizationResult thermalization_temperature(const QuenchSpec& quench, const QuadratureSpec& spec) {
  ModeIntegrator integ(quench.post, ModeWeight::gge(quench), spec);
  return thermalization_temperature(integ, quench);
}

}  // namespace xyq
