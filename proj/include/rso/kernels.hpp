#pragma once
// Hot inner loops with a scalar reference and an AVX2 variant picked once at
// startup. RSO_FORCE_SCALAR=1 in the environment pins the scalar path.
#include <cstddef>

namespace rso::kernels {

double dot(const double* a, const double* b, std::size_t n);
// sum_k a[k]*b[k]*c[k]
double dot3(const double* a, const double* b, const double* c, std::size_t n);
// out[k] = (1-p) in[k] + p in[k-1], k = 0..n  (in has n entries, out has n+1)
void binomial_step(const double* in, double* out, std::size_t n, double p);

const char* active_variant();
bool simd_available();

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
void binomial_step(const double* in, double* out, std::size_t n, double p);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
void binomial_step(const double* in, double* out, std::size_t n, double p);
}  // namespace avx2

}  // namespace rso::kernels
