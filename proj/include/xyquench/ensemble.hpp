#pragma once

#include <string>

#include "xyquench/model.hpp"
#include "xyquench/quadrature.hpp"

namespace xyq {

/// A temperature with explicit markers for the two boundary cases.
class Temperature {
 public:
  enum class Kind { Zero, Finite, Infinite };

  static Temperature zero() { return Temperature(Kind::Zero, 0.0); }
  static Temperature infinite();
  /// Requires 0 < value < inf.
  static Temperature finite(double value);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  /// 0, the finite value, or +inf.
  double value() const { return value_; }

  friend bool operator==(const Temperature&, const Temperature&) = default;

 private:
  Temperature(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

using EffectiveTemperature = Temperature;

/// Occupation weight w(p) in [0, 1] entering the mode integrals:
/// 1 for the ground state, tanh(e/2T) for a Gibbs state, |cos_delta| for
/// the generalized Gibbs ensemble of a quench.
class ModeWeight {
 public:
  enum class Kind { GroundState, Thermal, Gge };

  static ModeWeight ground_state();
  /// T > 0; T = +inf gives w = 0.
  static ModeWeight thermal(double temperature);
  /// Zero maps to the ground state, Infinite to w = 0.
  static ModeWeight thermal(const Temperature& temperature);
  static ModeWeight gge(const QuenchSpec& quench);

  Kind kind() const { return kind_; }
  double temperature() const { return temperature_; }
  double half_beta() const { return half_beta_; }
  const QuenchSpec& quench() const { return quench_; }

  std::string describe() const;

 private:
  Kind kind_ = Kind::GroundState;
  double temperature_ = 0.0;
  double half_beta_ = 0.0;
  QuenchSpec quench_{};
};

/// w(p) for the post-quench (or equilibrium) parameters `params`. For a GGE
/// weight `params` must equal the quench's post-quench parameters.
double weight(const ModeWeight& w, const ModelParams& params, double p);

/// T_eff(p) with tanh(e(p) / 2 T_eff) = |cos_delta(p)|.
EffectiveTemperature effective_temperature(const QuenchSpec& quench, double p);

/// Signed occupancy factor cos_delta(p) of the post-quench modes; gives the
/// conserved energy of the initial state.
struct SignedQuenchOccupancy {
  QuenchSpec quench;
};

/// Energy per site -(1/4pi) * integral of e(p) w(p) over [-pi, pi].
double energy_density(const ModelParams& params, const ModeWeight& w, const QuadratureSpec& spec = {});
/// <Phi0|H|Phi0> / L with the signed cos_delta.
double energy_density(const SignedQuenchOccupancy& occupancy, const QuadratureSpec& spec = {});

/// R(T) = integral of e(p) tanh(e(p) / 2T) over [-pi, pi].
double thermal_energy_integral(const ModelParams& params, const Temperature& t, const QuadratureSpec& spec = {});

struct ThermalizationResult {
  Temperature t_th = Temperature::zero();
  double lhs = 0.0;              // integral of e |cos_delta|
  double full = 0.0;             // integral of e, R at T = 0
  double rhs = 0.0;              // R(T_th)
  double residual = 0.0;         // |rhs - lhs| / full
  double signed_integral = 0.0;  // integral of e cos_delta
  int iterations = 0;

  /// -lhs / 4pi, the energy density the Gibbs state is matched to.
  double matched_energy_density() const;
  /// -signed_integral / 4pi, the true postquench energy density.
  double postquench_energy_density() const;
};

class ModeIntegrator;

/// Bisection bounds and targets of the temperature solver.
struct ThermalizationLimits {
  static constexpr double kMinTemperature = 1e-12;
  static constexpr double kMaxTemperature = 1e12;
  static constexpr int kMaxIterations = 200;
  static constexpr double kResidual = 1e-10;
  static constexpr double kQuadratureRelTol = 1e-12;
};

/// Temperature whose Gibbs mode-energy integral equals the GGE one.
ThermalizationResult thermalization_temperature(const QuenchSpec& quench, const QuadratureSpec& spec = {});

/// Solves R(T) = lhs for the post-quench `params` and an arbitrary target.
/// Zero when lhs is within the residual target of R(0), Infinite when lhs
/// falls below R at the largest bracketed temperature.
ThermalizationResult solve_thermalization_temperature(const ModelParams& params, double lhs,
                                                      const QuadratureSpec& spec = {});
ThermalizationResult solve_thermalization_temperature(ModeIntegrator& integrator, double lhs);
/// Same as the QuenchSpec overload on an integrator whose cuts include the
/// quench's GGE weight.
ThermalizationResult thermalization_temperature(ModeIntegrator& integrator, const QuenchSpec& quench);

}  // namespace xyq
