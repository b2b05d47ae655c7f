// AVX2/FMA kernels. Compiled with per-function target attributes rather than
// -mavx2 on the whole TU, so no inline code from shared headers is emitted
// with AVX2 encodings.

#include "dectlink/kernels.hpp"

#if defined(DECTLINK_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <algorithm>
#include <cfloat>
#include <cstdint>

#define DECTLINK_AVX2 __attribute__((target("avx2,fma")))

namespace dectlink::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

// Natural log of 4 positive finite doubles. Mantissa/exponent split on the
// bit pattern, then the Cephes rational approximation on [sqrt(1/2), sqrt(2)).
DECTLINK_AVX2 inline __m256d log_pd(__m256d x) {
  // Rescale subnormals into the normal range first.
  const __m256d tiny = _mm256_cmp_pd(x, _mm256_set1_pd(DBL_MIN), _CMP_LT_OQ);
  x = _mm256_blendv_pd(x, _mm256_mul_pd(x, _mm256_set1_pd(0x1p52)), tiny);
  const __m256d exp_adjust = _mm256_and_pd(tiny, _mm256_set1_pd(-52.0));

  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  // int64 -> double for 0 <= v < 2^52 via the 2^52 magic constant
  const __m256d magic = _mm256_set1_pd(0x1p52);
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
  e = _mm256_add_pd(_mm256_sub_pd(e, _mm256_set1_pd(1022.0)), exp_adjust);

  // mantissa in [0.5, 1)
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                      _mm256_set1_epi64x(0x3FE0000000000000LL)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d below = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(below, one));
  m = _mm256_sub_pd(_mm256_blendv_pd(m, _mm256_add_pd(m, m), below), one);

  const __m256d z = _mm256_mul_pd(m, m);

  __m256d p = _mm256_set1_pd(1.01875663804580931796E-4);
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(4.97494994976747001425E-1));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(4.70579119878881725854E0));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(1.44989225341610930846E1));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(1.79368678507819816313E1));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(7.70838733755885391666E0));

  __m256d q = _mm256_add_pd(m, _mm256_set1_pd(1.12873587189167450590E1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(4.52279145837532221105E1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(8.29875266912776603211E1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(7.11544750618563894466E1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(2.31251620126765340583E1));

  __m256d y = _mm256_mul_pd(m, _mm256_div_pd(_mm256_mul_pd(z, p), q));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679E-4), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
  const __m256d r = _mm256_add_pd(m, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
}

// exp(x) for finite x <= ~709; results below the normal range flush to 0.
DECTLINK_AVX2 inline __m256d exp_pd(__m256d x) {
  const __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
  x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));

  const __m256d n = _mm256_floor_pd(
      _mm256_fmadd_pd(x, _mm256_set1_pd(1.4426950408889634073599), _mm256_set1_pd(0.5)));
  x = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125E-1), x);
  x = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212E-6), x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
  p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(3.02994407707441961300E-2));
  p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(9.99999999999999999910E-1));
  p = _mm256_mul_pd(p, x);

  __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.52448340349684104192E-3));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.27265548208155028766E-1));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.00000000000000000009E0));

  __m256d r = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

  // scale by 2^n
  const __m256i ni = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  const __m256i pow2 = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  r = _mm256_mul_pd(r, _mm256_castsi256_pd(pow2));
  return _mm256_andnot_pd(underflow, r);
}

DECTLINK_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

DECTLINK_AVX2 void affine_log10(std::span<const double> xs, double intercept, double slope,
                                std::span<double> out_span) {
  const double* x = xs.data();
  double* out = out_span.data();
  const std::size_t n = xs.size();
  const __m256d a = _mm256_set1_pd(intercept);
  // slope * log10(v) = (slope * log10(e)) * ln(v)
  const __m256d b = _mm256_set1_pd(slope * 0.43429448190325182765);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(b, log_pd(_mm256_loadu_pd(x + i)), a));
  }
  if (i < n) {
    alignas(32) double tail[kLanes] = {1.0, 1.0, 1.0, 1.0};
    std::copy(x + i, x + n, tail);
    _mm256_store_pd(tail, _mm256_fmadd_pd(b, log_pd(_mm256_load_pd(tail)), a));
    std::copy(tail, tail + (n - i), out + i);
  }
}

DECTLINK_AVX2 double sum_db_to_linear(std::span<const double> dbs, double shift) {
  const double* db = dbs.data();
  const std::size_t n = dbs.size();
  // 10^(v/10) = exp(v * ln(10) / 10)
  const __m256d scale = _mm256_set1_pd(0.23025850929940456840);
  const __m256d s = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(db + i), s);
    acc = _mm256_add_pd(acc, exp_pd(_mm256_mul_pd(v, scale)));
  }
  double total = hsum(acc);
  if (i < n) {
    alignas(32) double tail[kLanes];
    std::fill(tail, tail + kLanes, shift);
    std::copy(db + i, db + n, tail);
    const __m256d v = _mm256_sub_pd(_mm256_load_pd(tail), s);
    _mm256_store_pd(tail, exp_pd(_mm256_mul_pd(v, scale)));
    for (std::size_t k = 0; k < n - i; ++k) total += tail[k];
  }
  return total;
}

DECTLINK_AVX2 SumMinMax sum_min_max(std::span<const double> xs) {
  const double* x = xs.data();
  const std::size_t n = xs.size();
  __m256d sum = _mm256_setzero_pd();
  __m256d lo = _mm256_set1_pd(x[0]);
  __m256d hi = lo;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v = _mm256_loadu_pd(x + i);
    sum = _mm256_add_pd(sum, v);
    lo = _mm256_min_pd(lo, v);
    hi = _mm256_max_pd(hi, v);
  }
  alignas(32) double lo_l[kLanes];
  alignas(32) double hi_l[kLanes];
  _mm256_store_pd(lo_l, lo);
  _mm256_store_pd(hi_l, hi);
  SumMinMax r{hsum(sum), *std::min_element(lo_l, lo_l + kLanes),
              *std::max_element(hi_l, hi_l + kLanes)};
  for (; i < n; ++i) {
    r.sum += x[i];
    r.min = std::min(r.min, x[i]);
    r.max = std::max(r.max, x[i]);
  }
  return r;
}

DECTLINK_AVX2 double sum_squared_deviation(std::span<const double> xs, double center) {
  const double* x = xs.data();
  const std::size_t n = xs.size();
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - center;
    total += d * d;
  }
  return total;
}

}  // namespace dectlink::kernels::avx2

#endif
