#pragma once
// Counter-based random streams. Every deviate is a pure function of its key,
// so evaluation order and thread count never change results.
#include <cstdint>
#include <cmath>
#include <limits>

namespace rso {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t key_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ mix64(v + 0x632be59bd9b4e019ULL));
}

inline constexpr std::uint64_t pack_site(int x, int y) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
         static_cast<std::uint32_t>(y);
}

// open interval (0,1), 53-bit resolution
inline double to_unit(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Deviate for one lattice site of one replica.
inline double site_uniform(std::uint64_t seed, int x, int y, std::uint64_t replica) {
  std::uint64_t h = key_combine(mix64(seed), pack_site(x, y));
  return to_unit(key_combine(h, replica));
}

// Sequential view over a keyed counter; satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;
  Stream(std::uint64_t seed, std::uint64_t tag = 0, std::uint64_t sub = 0)
      : key_(key_combine(key_combine(mix64(seed), tag), sub)) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return key_combine(key_, ctr_++); }
  double uniform() { return to_unit((*this)()); }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  // unbiased enough for n << 2^64
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

inline double Stream::normal() {
  double u = uniform(), v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
}

}  // namespace rso
