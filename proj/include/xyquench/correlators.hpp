#pragma once

#include "xyquench/ensemble.hpp"
#include "xyquench/kernels.hpp"
#include "xyquench/model.hpp"
#include "xyquench/quadrature.hpp"

namespace xyq {

struct GFunctions {
  double g_c = 0.0;
  double g_s = 0.0;
  double g_0 = 0.0;
};

/// Nearest-neighbour expectation values of a translation-invariant state.
/// sxsx = g_c - g_s, sysy = g_c + g_s, szsz = g_0^2 - g_c^2 + g_s^2, sz = g_0.
struct CorrelatorSet {
  double g_c = 0.0;
  double g_s = 0.0;
  double g_0 = 0.0;
  double sxsx = 0.0;
  double sysy = 0.0;
  double szsz = 0.0;
  double sz = 0.0;

  static CorrelatorSet from_g(const GFunctions& g);
  /// Synthetic input given directly as expectation values. szsz is taken as
  /// given; g_c, g_s and g_0 are back-filled from sxsx, sysy and sz.
  static CorrelatorSet from_expectations(double sxsx, double sysy, double szsz, double sz);
};

/// g-functions from full-range mode integrals (see kernels::ModeSums).
GFunctions g_from_moments(const kernels::ModeSums& m);

GFunctions g_functions(const ModelParams& params, const ModeWeight& w, const QuadratureSpec& spec = {});
CorrelatorSet nn_correlators(const ModelParams& params, const ModeWeight& w, const QuadratureSpec& spec = {});

}  // namespace xyq
