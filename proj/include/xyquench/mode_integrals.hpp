#pragma once

#include <vector>

#include "xyquench/ensemble.hpp"
#include "xyquench/kernels.hpp"
#include "xyquench/model.hpp"
#include "xyquench/quadrature.hpp"

namespace xyq {

/// Panel cuts on [0, pi] for integrands built from `params` and weight `w`:
/// gapless momenta, dispersion minima and, for a GGE weight, the pre-quench
/// counterparts plus the sign changes of cos_delta. User breakpoints are
/// folded onto [0, pi] by |p|.
std::vector<double> mode_cuts(const ModelParams& params, const ModeWeight& w,
                              const std::vector<double>& user_breakpoints = {});

kernels::ModeParams kernel_params(const ModelParams& params, const ModeWeight& w);

/// Integrals over [-pi, pi] of the mode integrands for fixed post-quench
/// parameters. All integrands are even in p, so only [0, pi] is sampled.
/// Holds a node cache; use one instance per thread.
class ModeIntegrator {
 public:
  /// Cuts are placed for `cut_weight` (pass the GGE weight when GGE
  /// integrals will be requested).
  ModeIntegrator(const ModelParams& params, const ModeWeight& cut_weight, const QuadratureSpec& spec);

  const ModelParams& params() const { return params_; }
  const QuadratureSpec& spec() const { return spec_; }
  const std::vector<double>& cuts() const { return grid_.cuts(); }

  kernels::ModeSums moments(const ModeWeight& w);
  /// Integral of e(p) w(p).
  double energy_integral(const ModeWeight& w);
  double energy_integral(const ModeWeight& w, double rel_tol, double abs_tol);

 private:
  ModelParams params_;
  QuadratureSpec spec_;
  QuadratureGrid grid_;
};

}  // namespace xyq
