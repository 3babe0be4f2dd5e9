#include "xyquench/correlators.hpp"

#include <numbers>

#include "xyquench/mode_integrals.hpp"

namespace xyq {

CorrelatorSet CorrelatorSet::from_g(const GFunctions& g) {
  CorrelatorSet c;
  c.g_c = g.g_c;
  c.g_s = g.g_s;
  c.g_0 = g.g_0;
  c.sxsx = g.g_c - g.g_s;
  c.sysy = g.g_c + g.g_s;
  c.szsz = g.g_0 * g.g_0 - g.g_c * g.g_c + g.g_s * g.g_s;
  c.sz = g.g_0;
  return c;
}

CorrelatorSet CorrelatorSet::from_expectations(double sxsx, double sysy, double szsz, double sz) {
  CorrelatorSet c;
  c.g_c = 0.5 * (sxsx + sysy);
  c.g_s = 0.5 * (sysy - sxsx);
  c.g_0 = sz;
  c.sxsx = sxsx;
  c.sysy = sysy;
  c.szsz = szsz;
  c.sz = sz;
  return c;
}

GFunctions g_from_moments(const kernels::ModeSums& m) {
  constexpr double inv_pi = std::numbers::inv_pi;
  return {m.gc * inv_pi, -m.gs * inv_pi, m.g0 * inv_pi};
}

GFunctions g_functions(const ModelParams& params, const ModeWeight& w, const QuadratureSpec& spec) {
  ModeIntegrator integ(params, w, spec);
  return g_from_moments(integ.moments(w));
}

CorrelatorSet nn_correlators(const ModelParams& params, const ModeWeight& w, const QuadratureSpec& spec) {
  return CorrelatorSet::from_g(g_functions(params, w, spec));
}

}  // namespace xyq
