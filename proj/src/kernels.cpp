#include "rso/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace rso::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

void binomial_step(const double* in, double* out, std::size_t n, double p) {
  double q = 1.0 - p;
  out[n] = p * in[n - 1];
  for (std::size_t k = n - 1; k > 0; --k) out[k] = q * in[k] + p * in[k - 1];
  out[0] = q * in[0];
}

}  // namespace scalar

#ifndef RSO_HAVE_AVX2_TU
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) { return scalar::dot(a, b, n); }
double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  return scalar::dot3(a, b, c, n);
}
void binomial_step(const double* in, double* out, std::size_t n, double p) {
  scalar::binomial_step(in, out, n, p);
}
}  // namespace avx2
#endif

namespace {

bool detect() {
  const char* f = std::getenv("RSO_FORCE_SCALAR");
  if (f && std::strcmp(f, "0") != 0) return false;
#if defined(RSO_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct Table {
  bool simd;
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot3)(const double*, const double*, const double*, std::size_t);
  void (*binomial_step)(const double*, double*, std::size_t, double);
};

const Table& table() {
  static const Table t = detect()
      ? Table{true, avx2::dot, avx2::dot3, avx2::binomial_step}
      : Table{false, scalar::dot, scalar::dot3, scalar::binomial_step};
  return t;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  return table().dot3(a, b, c, n);
}
void binomial_step(const double* in, double* out, std::size_t n, double p) {
  table().binomial_step(in, out, n, p);
}
const char* active_variant() { return table().simd ? "avx2" : "scalar"; }
bool simd_available() { return table().simd; }

}  // namespace rso::kernels
