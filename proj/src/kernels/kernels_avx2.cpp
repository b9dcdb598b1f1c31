// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma; selected at runtime
// only when the CPU reports both features. The vector log is the cephes
// rational approximation (valid for positive normal doubles, which is all
// the callers ever pass: variances are floored well above denormal range).

#include <immintrin.h>

#include <cmath>

#include "migstock/kernels.hpp"

namespace migstock::kernels::avx2 {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d h = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, h));
}

inline __m256d log_pd(__m256d x) {
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_exp = _mm256_set1_epi64x(0x3FE0000000000000LL);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);

  __m256i bits = _mm256_castpd_si256(x);
  __m256i biased = _mm256_srli_epi64(bits, 52);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, magic)),
                            _mm256_castsi256_pd(magic));
  e = _mm256_sub_pd(e, _mm256_set1_pd(1022.0));
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_exp));

  // m in [0.5, 1): below sqrt(1/2) use 2m-1 and drop the exponent by one.
  const __m256d sqrth = _mm256_set1_pd(0.70710678118654752440);
  __m256d below = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(below, _mm256_set1_pd(1.0)));
  __m256d xm = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(below, m)),
                             _mm256_set1_pd(1.0));

  __m256d z = _mm256_mul_pd(xm, xm);
  __m256d p = _mm256_set1_pd(1.01875663804580931796e-4);
  p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(4.97494994976747001425e-1));
  p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(4.70579119878881725854e0));
  p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(1.44989225341610930846e1));
  p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(1.79368678507819816313e1));
  p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(7.70838733755885391666e0));
  __m256d q = _mm256_add_pd(xm, _mm256_set1_pd(1.12873587189167450590e1));
  q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(4.52279145837532221105e1));
  q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(8.29875266912776603211e1));
  q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(7.11544750618563894466e1));
  q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(2.31251620126765340583e1));

  __m256d y = _mm256_mul_pd(xm, _mm256_div_pd(_mm256_mul_pd(z, p), q));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
  __m256d r = _mm256_add_pd(xm, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
}

}  // namespace

double sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double out = hsum(acc);
  for (; i < n; ++i) out += a[i];
  return out;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

double sumsq(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += a[i] * a[i];
  return out;
}

double ar1_innovation_ssq(const double* e, std::size_t n, double rho) {
  if (n < 2) return 0.0;
  __m256d acc = _mm256_setzero_pd();
  const __m256d r = _mm256_set1_pd(rho);
  std::size_t t = 1;
  for (; t + 4 <= n; t += 4) {
    __m256d cur = _mm256_loadu_pd(e + t);
    __m256d prev = _mm256_loadu_pd(e + t - 1);
    __m256d d = _mm256_fnmadd_pd(r, prev, cur);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double out = hsum(acc);
  for (; t < n; ++t) {
    double d = e[t] - rho * e[t - 1];
    out += d * d;
  }
  return out;
}

double gaussian_loglik(const double* resid, const double* var, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(var + i);
    __m256d rz = _mm256_loadu_pd(resid + i);
    __m256d ratio = _mm256_div_pd(_mm256_mul_pd(rz, rz), v);
    acc = _mm256_add_pd(acc, _mm256_add_pd(log_pd(v), ratio));
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += std::log(var[i]) + resid[i] * resid[i] / var[i];
  return -0.5 * (static_cast<double>(n) * kLog2Pi + out);
}

double gaussian_loglik_shifted(const double* resid, const double* var, double shift,
                               std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d sh = _mm256_set1_pd(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_add_pd(_mm256_loadu_pd(var + i), sh);
    __m256d rz = _mm256_loadu_pd(resid + i);
    __m256d ratio = _mm256_div_pd(_mm256_mul_pd(rz, rz), v);
    acc = _mm256_add_pd(acc, _mm256_add_pd(log_pd(v), ratio));
  }
  double out = hsum(acc);
  for (; i < n; ++i) {
    double v = var[i] + shift;
    out += std::log(v) + resid[i] * resid[i] / v;
  }
  return -0.5 * (static_cast<double>(n) * kLog2Pi + out);
}

double gaussian_loglik_const(const double* resid, double var, std::size_t n) {
  double ssq = sumsq(resid, n);
  return -0.5 * (static_cast<double>(n) * (kLog2Pi + std::log(var)) + ssq / var);
}

}  // namespace migstock::kernels::avx2
