#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "xyquench/correlators.hpp"
#include "xyquench/ensemble.hpp"
#include "xyquench/kernels.hpp"
#include "xyquench/model.hpp"
#include "xyquench/quadrature.hpp"

// Oracle cross-checks shared by the oracle-check command and the acceptance run.
namespace xyq::check {

struct Sample {
  ModelParams params;
  ModeWeight weight;
};

/// gamma in [0, 1], h in [0, 2]; weight drawn from ground, thermal with
/// T in [0.05, 5], or the GGE of a quench from a random gapped pre-quench
/// point. With `gapped`, the post-quench point keeps a margin from the
/// critical lines too.
Sample random_sample(std::mt19937_64& rng, bool gapped);

bool is_gapped(const ModelParams& p, double margin);

struct EigenReport {
  std::size_t samples = 0;
  double max_deviation = 0.0;  // |min(mu1, mu2) - lowest Jacobi eigenvalue|
  double lowest = 0.0;         // extremes of every PT spectrum
  double highest = 0.0;
  std::size_t max_negative = 0;
  std::size_t failures = 0;  // samples whose correlators could not be evaluated
};

EigenReport eigen_check(std::size_t samples, std::uint64_t seed, const QuadratureSpec& spec = {});

struct FiniteSizeReport {
  std::size_t samples = 0;
  int sites = 0;
  double max_error = 0.0;           // at `sites`, max over samples and components
  double min_ratio = 0.0;           // err(L) / err(2L) over samples above the floor
  std::size_t below_floor = 0;      // samples already at roundoff for 2L
  std::size_t ratio_violations = 0;  // err(2L) > err(L)
  double floor = 0.0;
};

/// Componentwise finite-chain vs integral deviations at L and 2L.
FiniteSizeReport finite_size_check(std::size_t samples, std::uint64_t seed, int sites = 512, double floor = 1e-12,
                                   const QuadratureSpec& spec = {});

struct ThermalizationReport {
  std::size_t samples = 0;
  double max_residual = 0.0;  // |R(T_th) - lhs| / full
  std::size_t monotonicity_violations = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;
};

/// Random gapped quenches; R(T) is also checked for monotonicity on
/// `grid_points` logarithmically spaced temperatures from gap/10 to ten
/// times the top of the band.
ThermalizationReport thermalization_check(std::size_t samples, std::uint64_t seed, int grid_points = 20,
                                          const QuadratureSpec& spec = {});

struct KernelReport {
  kernels::Isa isa = kernels::Isa::Scalar;
  std::size_t nodes = 0;
  double max_relative_deviation = 0.0;  // vs the scalar kernel, per accumulated sum
};

/// Compares every available SIMD kernel against the scalar one on random nodes.
std::vector<KernelReport> kernel_check(std::size_t nodes, std::uint64_t seed);

}  // namespace xyq::check
