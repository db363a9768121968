#include <cmath>
#include <set>

#include "doctest.h"
#include "rso/msa.hpp"
#include "rso/rng.hpp"

using namespace rso;
using doctest::Approx;

namespace {
const EnsembleSpec kBern = EnsembleSpec::iid(SiteDistribution::bernoulli(0.5));

// half-aligned squares of one side inside q
std::vector<Site> corners(const Square& q, int side) {
  std::vector<Site> out;
  const int h = std::max(1, side / 2);
  for (int y = q.y0(); y + side - 1 <= q.y1(); y += h)
    for (int x = q.x0(); x + side - 1 <= q.x1(); x += h) out.push_back({x, y});
  return out;
}

ScaleVerdicts verdicts(const Square& top, int side, double p, Stream* rng) {
  ScaleVerdicts v;
  v.side = side;
  for (Site c : corners(top, side)) v.bad[c] = rng ? rng->uniform() < p : p > 0.5;
  return v;
}

// enumerate every nested chain explicitly
void brute_chains(const Square& q, const std::vector<ScaleVerdicts>& lv, std::size_t j, long& chains,
                  std::set<Site>& bottoms) {
  for (Site c : corners(q, lv[j].side)) {
    if (!lv[j].bad.at(c)) continue;
    Square sub{c, lv[j].side};
    if (j + 1 == lv.size()) {
      ++chains;
      bottoms.insert(c);
    } else {
      brute_chains(sub, lv, j + 1, chains, bottoms);
    }
  }
}
}  // namespace

TEST_CASE("scale schedule") {
  auto s = build_schedule(0.05, 0.04, 0.02, 1 << 10, 3);
  REQUIRE(s.log2L.size() == 3);
  CHECK(s.log2L[0] == 10);
  CHECK(s.log2L[1] == 14);
  CHECK(s.L(1) == 16384.0);
  CHECK(mtilde(0.05, 0.125) == 5);
  for (std::size_t k = 1; k < s.m.size(); ++k) CHECK(s.m[k] <= s.m[k - 1] + 1e-15);
  for (std::size_t k = 1; k < s.eta.size(); ++k) CHECK(s.eta[k] > s.eta[k - 1]);
  CHECK_THROWS_AS(build_schedule(0.0, 0.0, 0.0, 1024, 2), std::invalid_argument);
  // nu between delta and eps is required
  CHECK_THROWS_AS(build_schedule(0.05, 0.5, 0.125, 1024, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_schedule(0.05, 0.04, 0.02, 1000, 2), std::invalid_argument);
  auto j = to_json(s);
  CHECK(j["log2L"][1] == 14);
}

TEST_CASE("the prescribed M does not satisfy the scale window") {
  auto s = build_schedule(0.05, 0.04, 0.02, 1 << 10, 13);
  CHECK(s.M_tilde == 9);
  CHECK_FALSE(s.window_ok);
  CHECK(s.smallest_window_M == 12);
}

TEST_CASE("base frozen set") {
  CHECK(base_pitch(1.0) == 2);
  CHECK(base_pitch(0.25) == 32);
  auto F = base_frozen_set(0.25, Square{{0, 0}, 1024});
  CHECK(double(F.sites.size()) / (1024.0 * 1024.0) == Approx(1.0 / 1024));
  CHECK(F.eta == Approx(0.0625));
  for (const Site& p : F.sites) {
    CHECK(p.x % 32 == 0);
    CHECK(p.y % 32 == 0);
  }
  auto thin = base_frozen_set(0.25, Square{{0, 0}, 1024}, true);
  CHECK(thin.sites.size() * 2 == F.sites.size());
  // isolated grid points are dense at the smallest scale
  auto G = base_frozen_set(0.5, Square{{-32, -32}, 64});
  CHECK(G.sites.count({0, 0}));
  CHECK(regularity_check(G.sites, tilted_rect(-2, 1, -2, 1), 0.25).kind == RegularityVerdict::CertifiedIrregular);
}

TEST_CASE("square classification") {
  Square sq{{0, 0}, 4};
  GoodnessTest t;
  t.exponent = 2;
  t.trials = 5;
  FrozenAssignment all;
  for (int i = 0; i < 16; ++i) all.values[sq.site(i)] = 1.0;
  auto c = classify_square(sq, t, all, kBern, 1);
  CHECK(c.trials_used == 1);
  CHECK(c.good);
  auto a = classify_square(sq, t, {}, kBern, 3), b = classify_square(sq, t, {}, kBern, 3);
  CHECK(a.good == b.good);
  CHECK(a.worst_log_margin == b.worst_log_margin);
  // a large exponent always passes, a tiny one with steep decay fails
  t.exponent = 50;
  CHECK(classify_square(sq, t, {}, kBern, 4).good);
  t.exponent = -10;
  t.m = 5;
  CHECK_FALSE(classify_square(sq, t, {}, kBern, 4).good);
  CHECK_THROWS_AS(classify_square(Square{{0, 0}, 65}, t, {}, kBern, 4), std::invalid_argument);
}

TEST_CASE("hereditary counts on planted fixtures") {
  Square top{{0, 0}, 8};
  // top-aligned corners only; the top square fixes the grid origin
  ScaleVerdicts l4 = verdicts(top, 4, 1, nullptr), l2 = verdicts(top, 2, 1, nullptr);
  CHECK(l4.bad.size() == 9);
  CHECK(l2.bad.size() == 49);
  auto all = hereditary_bad_count(top, {l4, l2});
  CHECK(all.chains == 81);
  CHECK(all.distinct == 49);
  CHECK(hereditary_bad_count(top, {verdicts(top, 4, 0, nullptr), l2}).chains == 0);
  CHECK(hereditary_bad_count(top, {l4, verdicts(top, 2, 0, nullptr)}).chains == 0);
  // a single planted chain
  for (auto& [k, v] : l4.bad) v = false;
  for (auto& [k, v] : l2.bad) v = false;
  l4.bad[{4, 4}] = true;
  l2.bad[{5, 5}] = true;
  l2.bad[{0, 0}] = true;  // bad, but under good parents only
  auto one = hereditary_bad_count(top, {l4, l2});
  CHECK(one.chains == 1);
  CHECK(one.distinct == 1);
  l2.bad.erase({6, 6});
  CHECK_THROWS_AS(hereditary_bad_count(top, {l4, l2}), std::invalid_argument);
  CHECK(hereditary_bad_count(top, {}).chains == 0);
}

TEST_CASE("hereditary counts match brute force") {
  for (int r = 0; r < 60; ++r) {
    Stream rng(9, 9, std::uint64_t(r));
    Square top{{8 * int(rng.below(3)), 0}, 16};
    double p = rng.uniform(0.1, 0.9);
    std::vector<ScaleVerdicts> lv{verdicts(top, 8, p, &rng), verdicts(top, 4, p, &rng), verdicts(top, 2, p, &rng)};
    long chains = 0;
    std::set<Site> bottoms;
    brute_chains(top, lv, 0, chains, bottoms);
    auto hc = hereditary_bad_count(top, lv);
    CHECK(hc.chains == chains);
    CHECK(hc.distinct == long(bottoms.size()));
    CHECK(hc.distinct <= hc.chains);
  }
}

TEST_CASE("freeze update") {
  FrozenSetState F0 = base_frozen_set(0.5, Square{{0, 0}, 32});
  FreezeReport rep;
  auto same = freeze_update(F0, {}, 0.3, 4, 2.0, 4, {}, &rep);
  CHECK(same.sites == F0.sites);
  CHECK(same.k == 1);
  CHECK(rep.added == 0);
  Square q{{0, 0}, 16};
  auto one = freeze_update(F0, {{q, {Square{{9, 9}, 4}}}}, 0.3, 4, 2.0, 4, {}, &rep);
  CHECK(rep.added == 16);
  CHECK(rep.bound == 4 * 64);
  CHECK(rep.per_square_ok);
  CHECK(rep.added <= rep.bound);
  // too many covers for N
  freeze_update(F0, {{q, {Square{{0, 0}, 2}, Square{{4, 4}, 2}, Square{{8, 8}, 2}}}}, 0.3, 2, 2.0, 4, {}, &rep);
  CHECK_FALSE(rep.per_square_ok);
  CHECK(rep.flags.size() == 1);
}

TEST_CASE("deterministic propagation") {
  DetMsaInstance inst = random_detmsa_instance(1, 0, 32);
  inst.box = Square{{0, 0}, inst.sc.L0 / 2};
  CHECK(deterministic_propagation(inst).gate == "scales");
  // no defects, high potential: the conclusion holds
  DetMsaInstance clean;
  clean.sc.L0 = 16;
  clean.box = Square{{0, 0}, 16};
  clean.V.assign(256, 6.0);
  clean.E = 0.2;
  auto r = deterministic_propagation(clean);
  CHECK(r.applicable);
  CHECK(r.holds);
  CHECK(r.empirical_m >= clean.sc.m_tilde());
  long applicable = 0;
  for (int i = 0; i < 40; ++i) {
    auto res = deterministic_propagation(random_detmsa_instance(2, std::uint64_t(i), 16));
    if (!res.applicable) continue;
    ++applicable;
    CHECK(res.holds);
  }
  CHECK(applicable > 0);
}

TEST_CASE("initial-scale net probe") {
  Square box{{0, 0}, 24};
  SiteSet F;
  for (int i = 0; i < int(box.area()); ++i) F.insert(box.site(i));
  auto sure = initial_scale_probe(EnsembleSpec::iid(SiteDistribution::point(1)), 0.5, 3, box, F, 3, 1, true);
  CHECK(sure.net_frequency == 1.0);
  CHECK(sure.union_bound == 0.0);
  // the union bound controls the failure probability
  auto b = initial_scale_probe(kBern, 0.5, 2.5, box, F, 100, 2, true);
  CHECK(1.0 - b.net_frequency <= b.union_bound + 0.1);
  for (double R : {6.0, 8.0, 10.0}) {
    auto p = initial_scale_probe(kBern, 0.5, R, Square{{0, 0}, 32}, base_frozen_set(1.0, Square{{0, 0}, 32}).sites, 10, 3, true);
    CHECK(p.fitted > 0);
    CHECK(p.c > 0);
  }
  CHECK_THROWS_AS(initial_scale_probe(kBern, 0.5, 6, box, F, 1, 1), std::invalid_argument);
}

TEST_CASE("desk multiscale run") {
  DeskMsaConfig cfg;
  cfg.domain = 16;
  cfg.scales = {2, 4, 8, 16};
  cfg.M_tilde = 1;
  auto res = run_desk_msa(cfg, kBern, 5);
  REQUIRE(res.rows.size() == 4);
  // half-aligned squares: ((16 - s) / (s / 2) + 1)^2 per side
  CHECK(res.classes.size() == 225 + 49 + 9 + 1);
  long prev_frozen = 0;
  for (const auto& row : res.rows) {
    CHECK(row.growth_ok);
    CHECK(row.ready + row.not_ready == (row.k > cfg.M_tilde ? row.squares : 0));
    CHECK(row.frozen >= prev_frozen);
    prev_frozen = row.frozen;
  }
  auto again = run_desk_msa(cfg, kBern, 5);
  for (std::size_t i = 0; i < res.classes.size(); ++i) CHECK(res.classes[i].good == again.classes[i].good);
  cfg.scales = {4, 3};
  CHECK_THROWS_AS(run_desk_msa(cfg, kBern, 5), std::invalid_argument);
}
