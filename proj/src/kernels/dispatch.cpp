#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "xyquench/kernels.hpp"

namespace xyq::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(XYQ_HAVE_AVX2_KERNEL) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{default_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return cpu_has_avx2();
    case Isa::Neon:
#if defined(XYQ_HAVE_NEON_KERNEL)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa default_isa() {
  if (const char* env = std::getenv("XYQ_ISA")) {
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (isa_name(isa) == env && isa_available(isa)) return isa;
    }
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("kernel variant not available: " + std::string(isa_name(isa)));
  active().store(isa, std::memory_order_relaxed);
}

ModeSums accumulate_with(Isa isa, const ModeParams& mp, const double* cos_p, const double* sin_p,
                         const double* weight, std::size_t n) {
  switch (isa) {
#if defined(XYQ_HAVE_AVX2_KERNEL)
    case Isa::Avx2:
      return detail::accumulate_avx2(mp, cos_p, sin_p, weight, n);
#endif
#if defined(XYQ_HAVE_NEON_KERNEL)
    case Isa::Neon:
      return detail::accumulate_neon(mp, cos_p, sin_p, weight, n);
#endif
    default:
      return detail::accumulate_scalar(mp, cos_p, sin_p, weight, n);
  }
}

double accumulate_energy_with(Isa isa, const ModeParams& mp, const double* cos_p, const double* sin_p,
                              const double* weight, std::size_t n) {
  switch (isa) {
#if defined(XYQ_HAVE_AVX2_KERNEL)
    case Isa::Avx2:
      return detail::energy_avx2(mp, cos_p, sin_p, weight, n);
#endif
#if defined(XYQ_HAVE_NEON_KERNEL)
    case Isa::Neon:
      return detail::energy_neon(mp, cos_p, sin_p, weight, n);
#endif
    default:
      return detail::energy_scalar(mp, cos_p, sin_p, weight, n);
  }
}

ModeSums accumulate(const ModeParams& mp, const double* cos_p, const double* sin_p, const double* weight,
                    std::size_t n) {
  return accumulate_with(active_isa(), mp, cos_p, sin_p, weight, n);
}

double accumulate_energy(const ModeParams& mp, const double* cos_p, const double* sin_p, const double* weight,
                         std::size_t n) {
  return accumulate_energy_with(active_isa(), mp, cos_p, sin_p, weight, n);
}

}  // namespace xyq::kernels
