#include <algorithm>
#include <cmath>

#include "xyquench/kernels.hpp"

namespace xyq::kernels::detail {
namespace {

struct ModePoint {
  double d;   // h - cos p
  double e;   // dispersion
  double w;   // |weight|
  double ws;  // signed weight
};

// False when the node sits on a gapless mode and must be skipped.
inline bool evaluate(const ModeParams& mp, double c, double s2, ModePoint& pt) {
  pt.d = mp.h - c;
  pt.e = 2.0 * std::sqrt(mp.gamma * mp.gamma * s2 + pt.d * pt.d);
  if (pt.e == 0.0) return false;
  switch (mp.kind) {
    case WeightKind::Ground:
      pt.w = pt.ws = 1.0;
      return true;
    case WeightKind::Thermal:
      pt.w = pt.ws = std::tanh(pt.e * mp.half_beta);
      return true;
    case WeightKind::Gge: {
      const double d0 = mp.h0 - c;
      const double e0 = 2.0 * std::sqrt(mp.gamma0 * mp.gamma0 * s2 + d0 * d0);
      if (e0 == 0.0) return false;
      pt.ws = std::clamp(4.0 * (d0 * pt.d + mp.gamma * mp.gamma0 * s2) / (pt.e * e0), -1.0, 1.0);
      pt.w = std::abs(pt.ws);
      return true;
    }
  }
  return false;
}

}  // namespace

ModeSums accumulate_scalar(const ModeParams& mp, const double* cos_p, const double* sin_p, const double* weight,
                           std::size_t n) {
  ModeSums out;
  ModePoint pt;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cos_p[i];
    const double s2 = sin_p[i] * sin_p[i];
    if (!evaluate(mp, c, s2, pt)) continue;
    const double q = weight[i];
    const double r = q * pt.w / pt.e;
    out.gc -= c * pt.d * r;
    out.gs += mp.gamma * s2 * r;
    out.g0 += pt.d * r;
    out.energy += q * pt.e * pt.w;
    out.signed_energy += q * pt.e * pt.ws;
  }
  return out;
}

double energy_scalar(const ModeParams& mp, const double* cos_p, const double* sin_p, const double* weight,
                     std::size_t n) {
  double sum = 0.0;
  ModePoint pt;
  for (std::size_t i = 0; i < n; ++i) {
    if (!evaluate(mp, cos_p[i], sin_p[i] * sin_p[i], pt)) continue;
    sum += weight[i] * pt.e * pt.w;
  }
  return sum;
}

}  // namespace xyq::kernels::detail
