#include <bit>
#include <cmath>

#include "doctest.h"
#include "rso/rng.hpp"
#include "rso/sperner.hpp"

using namespace rso;
using doctest::Approx;

namespace {
std::vector<double> layer_brute(const ProductLaw& law) {
  std::vector<double> out(law.N() + 1, 0.0);
  for (Mask m = 0; m < (Mask(1) << law.N()); ++m) out[std::size_t(std::popcount(m))] += law.prob(m);
  return out;
}

SubsetFamily layer(int n, int k) {
  std::vector<Mask> m;
  for (Mask x = 0; x < (Mask(1) << n); ++x)
    if (std::popcount(x) == k) m.push_back(x);
  return SubsetFamily(n, m);
}

// h_{psi,j} straight from its defining sum over eta
std::vector<double> step_brute(const ProductLaw& law, Mask psi) {
  const int N = int(law.N()), k = std::popcount(psi);
  std::vector<double> q(law.N()), w(law.N(), 0.0);
  for (int i = 0; i < N; ++i) q[std::size_t(i)] = law.p[std::size_t(i)] / (1 - law.p[std::size_t(i)]);
  for (int j = 0; j < N; ++j) {
    if (psi >> j & 1) continue;
    double h = 0;
    for (Mask eta = 0; eta < (Mask(1) << N); ++eta) {
      if (std::popcount(eta) != k || (eta >> j & 1)) continue;
      double prod = 1;
      for (int l = 0; l < N; ++l)
        if (eta >> l & 1) prod *= q[std::size_t(l)];
      h += prod / (std::popcount(psi & ~eta) + 1);
    }
    w[std::size_t(j)] = q[std::size_t(j)] * h;
  }
  double tot = 0;
  for (double v : w) tot += v;
  for (double& v : w) v /= tot;
  return w;
}
}  // namespace

TEST_CASE("layer law") {
  auto l = layer_law(ProductLaw(std::vector<double>(4, 0.5)));
  std::vector<double> want{1, 4, 6, 4, 1};
  for (int k = 0; k <= 4; ++k) CHECK(l[std::size_t(k)] == Approx(want[std::size_t(k)] / 16));
  CHECK(layer_law(ProductLaw({0.2, 0.8}))[1] == Approx(0.68));
  for (int r = 0; r < 20; ++r) {
    ProductLaw law = random_law(1 + r % 12, 0.1, 4, std::uint64_t(r));
    auto a = layer_law(law), b = layer_brute(law);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == Approx(b[k]).epsilon(1e-12));
  }
}

TEST_CASE("elementary symmetric polynomials") {
  std::vector<double> q{1, 2, 3};
  CHECK(elementary_symmetric(q, 0) == 1.0);
  CHECK(elementary_symmetric(q, 1) == Approx(6));
  CHECK(elementary_symmetric(q, 2) == Approx(11));
  CHECK(elementary_symmetric(q, 3) == Approx(6));
  CHECK(elementary_symmetric(q, 4) == 0.0);
}

TEST_CASE("kappa-Sperner maximum") {
  CHECK(kappa_sperner_max(layer(4, 2)).kappa == Approx(1.0));
  auto two = kappa_sperner_max(SubsetFamily(2, {0b00, 0b01}));
  CHECK(two.kappa == Approx(0.5));
  CHECK(two.witness[0] == 0b10);
  CHECK(kappa_sperner_max(SubsetFamily(2, {0b00, 0b01, 0b11})).kappa == 0.0);
}

TEST_CASE("LYM sums") {
  auto f = layer(3, 1);
  ProductLaw uni(std::vector<double>(3, 0.5));
  LymSums s = lym_sums(f, uni);
  CHECK(s.classical == Approx(1.0));
  CHECK(s.classical_bound == Approx(1.0));
  CHECK(s.weighted == Approx(1.0));
  CHECK(s.weighted_bound == Approx(1.0));
}

TEST_CASE("weighted LYM holds on random antichains of 2^[5]") {
  int checked = 0;
  for (int r = 0; r < 200; ++r) {
    SubsetFamily f = random_family(5, 1 + r % 8, true, 17, std::uint64_t(r));
    CHECK(f.is_antichain());
    ProductLaw law = random_law(5, 0.2, 18, std::uint64_t(r));
    LymSums s = lym_sums(f, law);
    // exhaustive oracle for the weighted sum
    auto layers = layer_brute(law);
    std::vector<double> in(6, 0.0);
    for (Mask m : f.members) in[std::size_t(std::popcount(m))] += law.prob(m);
    double w = 0;
    for (int k = 0; k <= 5; ++k) w += in[std::size_t(k)] / layers[std::size_t(k)];
    CHECK(s.weighted == Approx(w).epsilon(1e-12));
    CHECK(s.weighted <= s.weighted_bound * (1 + 1e-12));
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("chain step distribution") {
  auto forced = chain_step_distribution(ProductLaw({0.5, 0.5}), 0b01);
  CHECK(forced[0] == 0.0);
  CHECK(forced[1] == Approx(1.0));
  auto sym = chain_step_distribution(ProductLaw({0.5, 0.5, 0.5}), 0);
  for (double v : sym) CHECK(v == Approx(1.0 / 3));
  ProductLaw law({0.2, 0.4, 0.6, 0.8});
  auto got = chain_step_distribution(law, 0b0100);
  auto want = step_brute(law, 0b0100);
  double tot = 0;
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(got[j] == Approx(want[j]).epsilon(1e-12));
    tot += got[j];
  }
  CHECK(tot == Approx(1.0).epsilon(1e-12));
  for (int r = 0; r < 30; ++r) {
    ProductLaw l = random_law(6, 0.1, 3, std::uint64_t(r));
    Stream rng(3, 9, std::uint64_t(r));
    Mask psi = Mask(rng.below(63));
    auto a = chain_step_distribution(l, psi), b = step_brute(l, psi);
    for (std::size_t j = 0; j < 6; ++j) CHECK(a[j] == Approx(b[j]).epsilon(1e-10));
  }
}

TEST_CASE("chain marginals equal conditioned product laws") {
  ProductLaw law = random_law(6, 0.2, 5, 0);
  CHECK(chain_marginal(law, 0)[0] == Approx(1.0));
  for (std::size_t k = 0; k <= 6; ++k) {
    auto a = chain_marginal(law, k), b = conditioned_law(law, k);
    double tv = 0;
    for (std::size_t m = 0; m < a.size(); ++m) tv += 0.5 * std::abs(a[m] - b[m]);
    CHECK(tv <= 1e-12);
  }
}

TEST_CASE("sampled chains are maximal and nested") {
  ProductLaw law = random_law(8, 0.2, 6, 0);
  for (int r = 0; r < 200; ++r) {
    auto c = sample_chain(law, 6, std::uint64_t(r));
    REQUIRE(c.size() == 9);
    CHECK(c[0] == 0u);
    for (std::size_t k = 1; k < c.size(); ++k) {
      CHECK((c[k] & c[k - 1]) == c[k - 1]);
      CHECK(std::popcount(c[k]) == int(k));
    }
  }
}

TEST_CASE("comb bound probe") {
  auto mid = layer(16, 8);
  ProductLaw uni(std::vector<double>(16, 0.5));
  CombProbe p = combbound_probe(mid, uni);
  CHECK(p.prob == Approx(12870.0 / 65536).epsilon(1e-12));
  CHECK(p.kappa == Approx(1.0));
  CHECK(std::isfinite(p.ratio));
  CHECK(combbound_probe(SubsetFamily(4, {}), ProductLaw(std::vector<double>(4, 0.5))).prob == 0.0);
}

TEST_CASE("family json round trip") {
  SubsetFamily f(5, {0b101, 0b011});
  auto g = family_from_json(to_json(f));
  CHECK(g.n == 5);
  CHECK(g.members == f.members);
}
