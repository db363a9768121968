#include <cmath>

#include "doctest.h"
#include "rso/checkers.hpp"
#include "rso/rng.hpp"

using namespace rso;
using doctest::Approx;

namespace {
Hamiltonian random_h(int L, std::uint64_t seed) {
  Stream rng(seed, 0x6368);
  std::vector<double> v(static_cast<std::size_t>(L * L));
  for (auto& x : v) x = rng.uniform() < 0.5 ? 0.0 : 1.0;
  return assemble(Square{{0, 0}, L}, v);
}
}  // namespace

TEST_CASE("energy window check") {
  auto h = random_h(4, 1);
  const double Ebar = 0.5, beta = 0.3;
  double a0 = minimal_alpha(h, Ebar, beta);
  // the hypothesis is tight at a0: every entry fits under e^{a0 - beta|x-y|}
  Eigen::MatrixXd R = resolvent(h, Ebar);
  double worst = -1e300;
  for (int x = 0; x < h.n(); ++x)
    for (int y = 0; y < h.n(); ++y)
      worst = std::max(worst, std::log(std::abs(R(x, y))) + beta * site_distance(h.box.site(x), h.box.site(y), Metric::Euclidean));
  CHECK(a0 == Approx(worst).epsilon(1e-12));
  auto ok = energy_window_check(h, Ebar, std::max(a0, beta) + 0.1, beta);
  CHECK(ok.verdict == Verdict::Holds);
  CHECK(ok.worst_ratio <= 1.0);
  CHECK(ok.window == Approx(1.0 / (2 * 16 * std::exp(std::max(a0, beta) + 0.1))));
  // at E = Ebar the factor two is slack by itself
  auto one = energy_window_check(h, Ebar, std::max(a0, beta) + 0.1, beta, 1);
  CHECK(one.worst_ratio <= 0.5 + 1e-12);
  CHECK(energy_window_check(h, Ebar, a0 - 0.5, beta).verdict == Verdict::Inapplicable);
  CHECK(energy_window_check(h, Ebar, 0.1, 0.2).verdict == Verdict::Inapplicable);
}

TEST_CASE("energy window suite on 12x12 boxes") {
  long applicable = 0, bad = 0;
  for (int r = 0; r < 40; ++r) {
    auto h = random_h(12, std::uint64_t(100 + r));
    Stream rng(3, 3, std::uint64_t(r));
    double Ebar = rng.uniform(0, 0.2), beta = rng.uniform(0.05, 0.5);
    double alpha = std::max(minimal_alpha(h, Ebar, beta), beta) + rng.uniform(0.01, 0.5);
    auto res = energy_window_check(h, Ebar, alpha, beta, 5, std::uint64_t(r));
    if (res.verdict == Verdict::Inapplicable) continue;
    ++applicable;
    bad += res.verdict == Verdict::Violated;
  }
  CHECK(applicable == 40);
  CHECK(bad == 0);
}

TEST_CASE("eigenvalue push abstains without its premises") {
  PushInstance none = random_push_instance(5, 0, 8);
  none.r = {0.5, 0.4, 0.3, 0.2, 0.1};
  CHECK(eigenvalue_push_check(none).verdict == Verdict::Inapplicable);
  CHECK(eigenvalue_push_check(none).failed_premise == "A");
  // no mass at k: diagonal matrix with e_k as an eigenvector far from v_j
  PushInstance diag;
  diag.A = Eigen::MatrixXd::Zero(4, 4);
  diag.A.diagonal() << 0.001, 0.0005, 0.9, 0.95;
  diag.k = 3;
  diag.r = {1e-4, 0.01, 0.1, 0.2, 0.5};
  diag.i = 3;
  diag.j = 4;
  auto d = eigenvalue_push_check(diag);
  CHECK(d.verdict == Verdict::Inapplicable);
}

TEST_CASE("eigenvalue push holds on generated instances") {
  long applicable = 0;
  for (int r = 0; r < 2000; ++r) {
    auto res = eigenvalue_push_check(random_push_instance(6, std::uint64_t(r), 12));
    if (res.verdict == Verdict::Inapplicable) continue;
    ++applicable;
    CHECK(res.verdict == Verdict::Holds);
    CHECK(res.count_after > res.count_before);
  }
  CHECK(applicable >= 500);
}

TEST_CASE("almost orthogonal count") {
  // duplicated vector: the hypothesis gate rejects
  Eigen::MatrixXd dup(3, 2);
  dup << 1, 1, 0, 0, 0, 0;
  CHECK(almost_orthogonal_count(dup).verdict == Verdict::Inapplicable);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(5, 5);
  auto o = almost_orthogonal_count(id);
  CHECK(o.verdict == Verdict::Holds);
  CHECK(o.bound == Approx((5 - std::sqrt(5.0)) * 5 / 2));
  // n+2 random unit vectors never pass the gate
  for (int r = 0; r < 200; ++r) {
    Stream rng(2, 2, std::uint64_t(r));
    int n = 2 + int(rng.below(10));
    Eigen::MatrixXd V(n, n + 2);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n + 2; ++b) V(a, b) = rng.normal();
    V.colwise().normalize();
    CHECK(almost_orthogonal_count(V).verdict == Verdict::Inapplicable);
  }
}

TEST_CASE("large mass square search") {
  Square box{{0, 0}, 12};
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(144);
  psi(box.index({6, 5})) = -2.0;
  auto m = large_mass_square_search(psi, box, {}, 3);
  CHECK(m.square.contains(Site{6, 5}));
  CHECK(m.ratio == Approx(1.0));
  CHECK(m.implied_C == Approx(0.0));
  CHECK_THROWS_AS(large_mass_square_search(psi, box, {Square{{0, 0}, 12}}, 3), std::runtime_error);
}

TEST_CASE("large mass square on a 48x48 ground state") {
  auto h = random_h(48, 9);
  auto sd = eigensolve(h);
  Eigen::VectorXd g = sd.vectors.col(0);
  std::vector<Square> avoid{Square{{5, 5}, 8}, Square{{30, 20}, 8}};
  auto m = large_mass_square_search(g, h.box, avoid, 6);
  CHECK(m.ratio > 0);
  Square dbl = scale_square(m.square, 2.0);
  CHECK(h.box.contains(dbl));
  for (const auto& a : avoid) CHECK_FALSE(dbl.intersects(a));
  // exhaustive admissible scan oracle
  double best = 0;
  for (int y = 0; y + 6 <= 48; ++y)
    for (int x = 0; x + 6 <= 48; ++x) {
      Square q{{x, y}, 6}, d2 = scale_square(q, 2.0);
      if (!h.box.contains(d2) || d2.intersects(avoid[0]) || d2.intersects(avoid[1])) continue;
      double mm = 0;
      for (int yy = y; yy < y + 6; ++yy)
        for (int xx = x; xx < x + 6; ++xx) mm = std::max(mm, std::abs(g(h.box.index({xx, yy}))));
      best = std::max(best, mm);
    }
  CHECK(m.ratio == Approx(best / g.cwiseAbs().maxCoeff()));
}
