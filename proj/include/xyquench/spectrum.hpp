#pragma once

#include <vector>

#include "xyquench/model.hpp"

// Single-mode quantities of the XY chain. Momenta are radians; every
// function here is even or odd in p and 2*pi periodic.
namespace xyq {

/// Mode energy 2*sqrt(gamma^2 sin^2 p + (h - cos p)^2).
double dispersion(const ModelParams& params, double p) noexcept;

/// Bogoliubov angle atan2(-gamma sin p, h - cos p).
/// Throws DegenerateModeError when both arguments vanish.
double bogoliubov_angle(const ModelParams& params, double p);

/// Cosine of the difference of pre- and post-quench Bogoliubov angles,
/// evaluated from the closed rational form and clamped to [-1, 1].
/// Exactly 1 for a trivial quench.
double cos_delta(const QuenchSpec& quench, double p);

struct Occupation {
  double f = 0.0;        // (1 - cos_delta) / 2
  double f_tilde = 0.0;  // -ln|cos_delta| / 2, +inf when cos_delta == 0
};

Occupation occupation_from_cos_delta(double cos_delta);
Occupation occupation(const QuenchSpec& quench, double p);

/// All p in [-pi, pi] where the dispersion vanishes, sorted. Closed form.
std::vector<double> gapless_momenta(const ModelParams& params);

/// Interior local minima of the dispersion in (0, pi): cos p = h / (1 - gamma^2).
std::vector<double> dispersion_minima(const ModelParams& params);

/// Momenta in [0, pi] where the numerator of cos_delta vanishes. The
/// numerator is quadratic in cos p, so the roots are found in closed form.
std::vector<double> cos_delta_roots(const QuenchSpec& quench);

/// Field of the disorder line, sqrt(1 - gamma^2).
double disorder_field(double gamma);

}  // namespace xyq
