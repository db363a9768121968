// Compiled with -mavx2 -mfma; only entered after a runtime cpu check.
#include <immintrin.h>

#include "rso/kernels.hpp"

namespace rso::kernels::avx2 {

static inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4)
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    s0 = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c + i), s0);
  }
  double s = hsum(s0);
  for (; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

void binomial_step(const double* in, double* out, std::size_t n, double p) {
  const double q = 1.0 - p;
  out[0] = q * in[0];
  out[n] = p * in[n - 1];
  __m256d vp = _mm256_set1_pd(p), vq = _mm256_set1_pd(q);
  std::size_t k = 1;
  for (; k + 4 <= n; k += 4) {
    __m256d cur = _mm256_loadu_pd(in + k), prev = _mm256_loadu_pd(in + k - 1);
    _mm256_storeu_pd(out + k, _mm256_fmadd_pd(vq, cur, _mm256_mul_pd(vp, prev)));
  }
  for (; k < n; ++k) out[k] = q * in[k] + p * in[k - 1];
}

}  // namespace rso::kernels::avx2
