// Compiled with -mavx2 -mfma. Keep this translation unit free of inline
// library code so no AVX-encoded copy of a shared symbol leaks out.
#include <immintrin.h>

#include "xyquench/kernels.hpp"

namespace xyq::kernels::detail {
namespace {

// Cephes exp: x = n ln2 + r, exp(r) = 1 + 2 r P(r^2) / (Q(r^2) - r P(r^2)).
inline __m256d exp_pd(__m256d x) {
  x = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-708.0)), _mm256_set1_pd(709.0));
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125E-1), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212E-6), r);
  const __m256d rr = _mm256_mul_pd(r, r);

  __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(3.02994407707441961300E-2));
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(9.99999999999999999910E-1));
  p = _mm256_mul_pd(p, r);

  __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.52448340349684104192E-3));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.27265548208155028766E-1));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.00000000000000000009E0));

  __m256d y = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  y = _mm256_fmadd_pd(_mm256_set1_pd(2.0), y, _mm256_set1_pd(1.0));

  // scale by 2^n through the exponent bits; n is in [-1022, 1023] here
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i bits = _mm256_add_epi64(_mm256_cvtepi32_epi64(n32), _mm256_set1_epi64x(1023));
  bits = _mm256_slli_epi64(bits, 52);
  return _mm256_mul_pd(y, _mm256_castsi256_pd(bits));
}

// tanh for x >= 0 (Cephes split at 0.625).
inline __m256d tanh_nonneg_pd(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d e2 = exp_pd(_mm256_add_pd(x, x));
  const __m256d big = _mm256_sub_pd(one, _mm256_div_pd(_mm256_set1_pd(2.0), _mm256_add_pd(e2, one)));

  const __m256d z = _mm256_mul_pd(x, x);
  __m256d p = _mm256_set1_pd(-9.64399179425052238628E-1);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-9.92877231001918586564E1));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.61468768441708447952E3));
  __m256d q = _mm256_add_pd(z, _mm256_set1_pd(1.12811678491632931402E2));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(2.23548839060100448583E3));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(4.84406305325125486048E3));
  const __m256d small = _mm256_fmadd_pd(_mm256_mul_pd(x, z), _mm256_div_pd(p, q), x);

  const __m256d use_small = _mm256_cmp_pd(x, _mm256_set1_pd(0.625), _CMP_LT_OQ);
  return _mm256_blendv_pd(big, small, use_small);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

struct Lanes {
  __m256d c, s2, q;
};

struct Eval {
  __m256d d, e, w, ws, ok;
};

struct Consts {
  __m256d h, g2, h0, g02, gg0, half_beta;
  WeightKind kind;

  explicit Consts(const ModeParams& mp)
      : h(_mm256_set1_pd(mp.h)),
        g2(_mm256_set1_pd(mp.gamma * mp.gamma)),
        h0(_mm256_set1_pd(mp.h0)),
        g02(_mm256_set1_pd(mp.gamma0 * mp.gamma0)),
        gg0(_mm256_set1_pd(mp.gamma * mp.gamma0)),
        half_beta(_mm256_set1_pd(mp.half_beta)),
        kind(mp.kind) {}
};

inline Eval evaluate(const Consts& k, const Lanes& in) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d two = _mm256_set1_pd(2.0);
  Eval out;
  out.d = _mm256_sub_pd(k.h, in.c);
  out.e = _mm256_mul_pd(two, _mm256_sqrt_pd(_mm256_fmadd_pd(k.g2, in.s2, _mm256_mul_pd(out.d, out.d))));
  out.ok = _mm256_cmp_pd(out.e, zero, _CMP_GT_OQ);
  switch (k.kind) {
    case WeightKind::Ground:
      out.w = out.ws = _mm256_set1_pd(1.0);
      break;
    case WeightKind::Thermal:
      out.w = out.ws = tanh_nonneg_pd(_mm256_mul_pd(out.e, k.half_beta));
      break;
    case WeightKind::Gge: {
      const __m256d d0 = _mm256_sub_pd(k.h0, in.c);
      const __m256d e0 = _mm256_mul_pd(two, _mm256_sqrt_pd(_mm256_fmadd_pd(k.g02, in.s2, _mm256_mul_pd(d0, d0))));
      out.ok = _mm256_and_pd(out.ok, _mm256_cmp_pd(e0, zero, _CMP_GT_OQ));
      const __m256d num = _mm256_mul_pd(_mm256_set1_pd(4.0), _mm256_fmadd_pd(k.gg0, in.s2, _mm256_mul_pd(d0, out.d)));
      __m256d cd = _mm256_div_pd(num, _mm256_mul_pd(out.e, e0));
      cd = _mm256_min_pd(_mm256_max_pd(cd, _mm256_set1_pd(-1.0)), _mm256_set1_pd(1.0));
      out.ws = cd;
      out.w = _mm256_andnot_pd(_mm256_set1_pd(-0.0), cd);
      break;
    }
  }
  return out;
}

// Loads lanes [i, i + 4) or a zero-weight padded tail.
inline Lanes load(const double* cos_p, const double* sin_p, const double* weight, std::size_t i, std::size_t n) {
  Lanes in;
  __m256d s;
  if (i + 4 <= n) {
    in.c = _mm256_loadu_pd(cos_p + i);
    s = _mm256_loadu_pd(sin_p + i);
    in.q = _mm256_loadu_pd(weight + i);
  } else {
    alignas(32) double c[4] = {0, 0, 0, 0}, sn[4] = {0, 0, 0, 0}, q[4] = {0, 0, 0, 0};
    for (std::size_t j = 0; i + j < n; ++j) {
      c[j] = cos_p[i + j];
      sn[j] = sin_p[i + j];
      q[j] = weight[i + j];
    }
    in.c = _mm256_load_pd(c);
    s = _mm256_load_pd(sn);
    in.q = _mm256_load_pd(q);
  }
  in.s2 = _mm256_mul_pd(s, s);
  return in;
}

}  // namespace

ModeSums accumulate_avx2(const ModeParams& mp, const double* cos_p, const double* sin_p, const double* weight,
                         std::size_t n) {
  const Consts k(mp);
  const __m256d gamma = _mm256_set1_pd(mp.gamma);
  __m256d gc = _mm256_setzero_pd(), gs = gc, g0 = gc, en = gc, sen = gc;
  for (std::size_t i = 0; i < n; i += 4) {
    const Lanes in = load(cos_p, sin_p, weight, i, n);
    const Eval v = evaluate(k, in);
    const __m256d qe = _mm256_mul_pd(in.q, v.e);
    const __m256d r = _mm256_and_pd(_mm256_div_pd(_mm256_mul_pd(in.q, v.w), v.e), v.ok);
    gc = _mm256_fnmadd_pd(_mm256_mul_pd(in.c, v.d), r, gc);
    gs = _mm256_fmadd_pd(_mm256_mul_pd(gamma, in.s2), r, gs);
    g0 = _mm256_fmadd_pd(v.d, r, g0);
    en = _mm256_add_pd(en, _mm256_and_pd(_mm256_mul_pd(qe, v.w), v.ok));
    sen = _mm256_add_pd(sen, _mm256_and_pd(_mm256_mul_pd(qe, v.ws), v.ok));
  }
  return {hsum(gc), hsum(gs), hsum(g0), hsum(en), hsum(sen)};
}

double energy_avx2(const ModeParams& mp, const double* cos_p, const double* sin_p, const double* weight,
                   std::size_t n) {
  const Consts k(mp);
  __m256d en = _mm256_setzero_pd();
  for (std::size_t i = 0; i < n; i += 4) {
    const Lanes in = load(cos_p, sin_p, weight, i, n);
    const Eval v = evaluate(k, in);
    en = _mm256_add_pd(en, _mm256_and_pd(_mm256_mul_pd(_mm256_mul_pd(in.q, v.e), v.w), v.ok));
  }
  return hsum(en);
}

}  // namespace xyq::kernels::detail
