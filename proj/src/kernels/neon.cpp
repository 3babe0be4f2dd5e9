// AArch64 Advanced SIMD variant, two lanes per vector. Mirrors avx2.cpp.
#include <arm_neon.h>

#include "xyquench/kernels.hpp"

namespace xyq::kernels::detail {
namespace {

inline float64x2_t masked(float64x2_t v, uint64x2_t mask) {
  return vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(v), mask));
}

inline float64x2_t exp_f64(float64x2_t x) {
  x = vminq_f64(vmaxq_f64(x, vdupq_n_f64(-708.0)), vdupq_n_f64(709.0));
  const float64x2_t n = vrndnq_f64(vmulq_f64(x, vdupq_n_f64(1.4426950408889634073599)));
  float64x2_t r = vfmsq_f64(x, n, vdupq_n_f64(6.93145751953125E-1));
  r = vfmsq_f64(r, n, vdupq_n_f64(1.42860682030941723212E-6));
  const float64x2_t rr = vmulq_f64(r, r);

  float64x2_t p = vdupq_n_f64(1.26177193074810590878E-4);
  p = vfmaq_f64(vdupq_n_f64(3.02994407707441961300E-2), p, rr);
  p = vfmaq_f64(vdupq_n_f64(9.99999999999999999910E-1), p, rr);
  p = vmulq_f64(p, r);

  float64x2_t q = vdupq_n_f64(3.00198505138664455042E-6);
  q = vfmaq_f64(vdupq_n_f64(2.52448340349684104192E-3), q, rr);
  q = vfmaq_f64(vdupq_n_f64(2.27265548208155028766E-1), q, rr);
  q = vfmaq_f64(vdupq_n_f64(2.00000000000000000009E0), q, rr);

  float64x2_t y = vdivq_f64(p, vsubq_f64(q, p));
  y = vfmaq_f64(vdupq_n_f64(1.0), vdupq_n_f64(2.0), y);

  int64x2_t bits = vaddq_s64(vcvtq_s64_f64(n), vdupq_n_s64(1023));
  bits = vshlq_n_s64(bits, 52);
  return vmulq_f64(y, vreinterpretq_f64_s64(bits));
}

inline float64x2_t tanh_nonneg_f64(float64x2_t x) {
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t e2 = exp_f64(vaddq_f64(x, x));
  const float64x2_t big = vsubq_f64(one, vdivq_f64(vdupq_n_f64(2.0), vaddq_f64(e2, one)));

  const float64x2_t z = vmulq_f64(x, x);
  float64x2_t p = vdupq_n_f64(-9.64399179425052238628E-1);
  p = vfmaq_f64(vdupq_n_f64(-9.92877231001918586564E1), p, z);
  p = vfmaq_f64(vdupq_n_f64(-1.61468768441708447952E3), p, z);
  float64x2_t q = vaddq_f64(z, vdupq_n_f64(1.12811678491632931402E2));
  q = vfmaq_f64(vdupq_n_f64(2.23548839060100448583E3), q, z);
  q = vfmaq_f64(vdupq_n_f64(4.84406305325125486048E3), q, z);
  const float64x2_t small = vfmaq_f64(x, vmulq_f64(x, z), vdivq_f64(p, q));

  return vbslq_f64(vcltq_f64(x, vdupq_n_f64(0.625)), small, big);
}

struct Lanes {
  float64x2_t c, s2, q;
};

struct Eval {
  float64x2_t d, e, w, ws;
  uint64x2_t ok;
};

inline Eval evaluate(const ModeParams& mp, const Lanes& in) {
  const float64x2_t two = vdupq_n_f64(2.0);
  Eval out;
  out.d = vsubq_f64(vdupq_n_f64(mp.h), in.c);
  out.e = vmulq_f64(two, vsqrtq_f64(vfmaq_f64(vmulq_f64(out.d, out.d), vdupq_n_f64(mp.gamma * mp.gamma), in.s2)));
  out.ok = vcgtq_f64(out.e, vdupq_n_f64(0.0));
  switch (mp.kind) {
    case WeightKind::Ground:
      out.w = out.ws = vdupq_n_f64(1.0);
      break;
    case WeightKind::Thermal:
      out.w = out.ws = tanh_nonneg_f64(vmulq_f64(out.e, vdupq_n_f64(mp.half_beta)));
      break;
    case WeightKind::Gge: {
      const float64x2_t d0 = vsubq_f64(vdupq_n_f64(mp.h0), in.c);
      const float64x2_t e0 =
          vmulq_f64(two, vsqrtq_f64(vfmaq_f64(vmulq_f64(d0, d0), vdupq_n_f64(mp.gamma0 * mp.gamma0), in.s2)));
      out.ok = vandq_u64(out.ok, vcgtq_f64(e0, vdupq_n_f64(0.0)));
      const float64x2_t num =
          vmulq_f64(vdupq_n_f64(4.0), vfmaq_f64(vmulq_f64(d0, out.d), vdupq_n_f64(mp.gamma * mp.gamma0), in.s2));
      float64x2_t cd = vdivq_f64(num, vmulq_f64(out.e, e0));
      cd = vminq_f64(vmaxq_f64(cd, vdupq_n_f64(-1.0)), vdupq_n_f64(1.0));
      out.ws = cd;
      out.w = vabsq_f64(cd);
      break;
    }
  }
  return out;
}

inline Lanes load(const double* cos_p, const double* sin_p, const double* weight, std::size_t i, std::size_t n) {
  Lanes in;
  float64x2_t s;
  if (i + 2 <= n) {
    in.c = vld1q_f64(cos_p + i);
    s = vld1q_f64(sin_p + i);
    in.q = vld1q_f64(weight + i);
  } else {
    const double c[2] = {cos_p[i], 0.0};
    const double sn[2] = {sin_p[i], 0.0};
    const double q[2] = {weight[i], 0.0};
    in.c = vld1q_f64(c);
    s = vld1q_f64(sn);
    in.q = vld1q_f64(q);
  }
  in.s2 = vmulq_f64(s, s);
  return in;
}

inline double hsum(float64x2_t v) { return vaddvq_f64(v); }

}  // namespace

ModeSums accumulate_neon(const ModeParams& mp, const double* cos_p, const double* sin_p, const double* weight,
                         std::size_t n) {
  const float64x2_t gamma = vdupq_n_f64(mp.gamma);
  float64x2_t gc = vdupq_n_f64(0.0), gs = gc, g0 = gc, en = gc, sen = gc;
  for (std::size_t i = 0; i < n; i += 2) {
    const Lanes in = load(cos_p, sin_p, weight, i, n);
    const Eval v = evaluate(mp, in);
    const float64x2_t qe = vmulq_f64(in.q, v.e);
    const float64x2_t r = masked(vdivq_f64(vmulq_f64(in.q, v.w), v.e), v.ok);
    gc = vfmsq_f64(gc, vmulq_f64(in.c, v.d), r);
    gs = vfmaq_f64(gs, vmulq_f64(gamma, in.s2), r);
    g0 = vfmaq_f64(g0, v.d, r);
    en = vaddq_f64(en, masked(vmulq_f64(qe, v.w), v.ok));
    sen = vaddq_f64(sen, masked(vmulq_f64(qe, v.ws), v.ok));
  }
  return {hsum(gc), hsum(gs), hsum(g0), hsum(en), hsum(sen)};
}

double energy_neon(const ModeParams& mp, const double* cos_p, const double* sin_p, const double* weight,
                   std::size_t n) {
  float64x2_t en = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; i += 2) {
    const Lanes in = load(cos_p, sin_p, weight, i, n);
    const Eval v = evaluate(mp, in);
    en = vaddq_f64(en, masked(vmulq_f64(vmulq_f64(in.q, v.e), v.w), v.ok));
  }
  return hsum(en);
}

}  // namespace xyq::kernels::detail
