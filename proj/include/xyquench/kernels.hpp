#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Batch evaluation of the mode integrands over quadrature nodes. The scalar
// kernel is the reference; vector variants must agree with it to rounding.
//
// For each node with cos p = c, sin p = s and quadrature weight q:
//   d = h - c, e = dispersion, w = occupation weight, ws = signed weight
//   gc += -c d w q / e      gs += gamma s^2 w q / e      g0 += d w q / e
//   energy += e w q         signed_energy += e ws q
// Nodes where e (or the pre-quench e0 for GGE) is exactly zero contribute
// nothing; the integrands are bounded there and such nodes carry no weight.
namespace xyq::kernels {

enum class WeightKind : std::uint8_t { Ground, Thermal, Gge };

struct ModeParams {
  double gamma = 1.0;
  double h = 0.0;
  double gamma0 = 1.0;  // pre-quench, Gge only
  double h0 = 0.0;
  double half_beta = 0.0;  // 1 / (2T), Thermal only
  WeightKind kind = WeightKind::Ground;
};

struct ModeSums {
  double gc = 0.0;
  double gs = 0.0;
  double g0 = 0.0;
  double energy = 0.0;
  double signed_energy = 0.0;
};

enum class Isa : std::uint8_t { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
/// Widest available variant, unless XYQ_ISA names another available one.
Isa default_isa();
Isa active_isa();
/// Throws std::invalid_argument if `isa` is not available on this CPU.
void set_active_isa(Isa isa);

ModeSums accumulate(const ModeParams& mp, const double* cos_p, const double* sin_p, const double* weight,
                    std::size_t n);
/// Only the `energy` component.
double accumulate_energy(const ModeParams& mp, const double* cos_p, const double* sin_p, const double* weight,
                         std::size_t n);

ModeSums accumulate_with(Isa isa, const ModeParams& mp, const double* cos_p, const double* sin_p,
                         const double* weight, std::size_t n);
double accumulate_energy_with(Isa isa, const ModeParams& mp, const double* cos_p, const double* sin_p,
                              const double* weight, std::size_t n);

namespace detail {
ModeSums accumulate_scalar(const ModeParams&, const double*, const double*, const double*, std::size_t);
double energy_scalar(const ModeParams&, const double*, const double*, const double*, std::size_t);
#if defined(XYQ_HAVE_AVX2_KERNEL)
ModeSums accumulate_avx2(const ModeParams&, const double*, const double*, const double*, std::size_t);
double energy_avx2(const ModeParams&, const double*, const double*, const double*, std::size_t);
#endif
#if defined(XYQ_HAVE_NEON_KERNEL)
ModeSums accumulate_neon(const ModeParams&, const double*, const double*, const double*, std::size_t);
double energy_neon(const ModeParams&, const double*, const double*, const double*, std::size_t);
#endif
}  // namespace detail

}  // namespace xyq::kernels
