// Acceptance runner: `acceptance [C<n> ...]` prints one [PASS]/[FAIL] line per
// criterion and exits nonzero if any fails.
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rso/checkers.hpp"
#include "rso/decomposition.hpp"
#include "rso/experiments.hpp"
#include "rso/msa.hpp"
#include "rso/rng.hpp"
#include "rso/spectral.hpp"
#include "rso/sperner.hpp"
#include "rso/stats.hpp"
#include "rso/tilted.hpp"

using namespace rso;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string f(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

const EnsembleSpec& bern() {
  static const EnsembleSpec s = EnsembleSpec::iid(SiteDistribution::bernoulli(0.5));
  return s;
}

Outcome c1() {
  double worst = 0;
  for (int r = 0; r < 100; ++r) {
    Square box{{0, 0}, 10};
    PotentialField V = sample_potential(bern(), box, {}, 101, std::uint64_t(r));
    Stream rng(101, 1, std::uint64_t(r));
    Square inner{{1 + int(rng.below(5)), 1 + int(rng.below(5))}, 4};
    worst = std::max(worst, geometric_resolvent_check(assemble(box, V), inner, -1.0).max_residual);
  }
  return {worst <= 1e-9, "max residual " + f(worst)};
}

Outcome c2() {
  Outcome o;
  auto w = uniform_parameter_bounds(0.25, 0.5, 1.0);
  bool example = std::abs(w.p_minus - 1.0 / 8) < 1e-15 && std::abs(w.iota - 1.0 / 1040) < 1e-15;
  o.pass = example;
  const std::vector<SiteDistribution> laws = {
      SiteDistribution::bernoulli(0.5), SiteDistribution::uniform(0, 1),
      SiteDistribution({{0.0, 1.0 / 3}, {0.5, 1.0 / 3}, {1.0, 1.0 / 3}}, {}, 1.0)};
  double worst = 0;
  for (const auto& d : laws) {
    const double g = 0.25, rho = anti_concentration(d, g);
    auto dec = decompose(d, g, rho);
    double v = verify_distribution(d, dec);
    worst = std::max(worst, v);
    o.pass = o.pass && v <= 1e-9 && dec.p >= dec.window.p_minus - 1e-15 && dec.p <= dec.window.p_plus + 1e-15 &&
             dec.Z.inf() >= dec.window.iota - 1e-15;
  }
  o.detail = std::string("window example ") + (example ? "exact" : "wrong") + ", max verify deviation " + f(worst);
  return o;
}

Outcome c3() {
  double tv_worst = 0;
  for (int N = 1; N <= 8; ++N)
    for (int r = 0; r < 50; ++r) {
      ProductLaw law = random_law(N, 0.2, 303, std::uint64_t(N * 100 + r));
      for (std::size_t k = 0; k <= std::size_t(N); ++k) {
        auto a = chain_marginal(law, k), b = conditioned_law(law, k);
        double tv = 0;
        for (std::size_t m = 0; m < a.size(); ++m) tv += 0.5 * std::abs(a[m] - b[m]);
        tv_worst = std::max(tv_worst, tv);
      }
    }
  ProductLaw law = random_law(8, 0.2, 304, 0);
  const long n = 100000;
  std::vector<std::vector<long>> counts(9, std::vector<long>(256, 0));
  for (long i = 0; i < n; ++i) {
    auto c = sample_chain(law, 305, std::uint64_t(i));
    for (std::size_t k = 0; k < c.size(); ++k) ++counts[k][c[k]];
  }
  double zmax = 0;
  for (std::size_t k = 0; k <= 8; ++k) {
    auto exact = chain_marginal(law, k);
    for (std::size_t m = 0; m < 256; ++m) {
      double p = exact[m], fr = double(counts[k][m]) / double(n);
      if (p <= 0 || p >= 1) {
        if (fr != p) zmax = INFINITY;
        continue;
      }
      zmax = std::max(zmax, std::abs(fr - p) / std::sqrt(p * (1 - p) / double(n)));
    }
  }
  return {tv_worst <= 1e-12 && zmax <= 4, "max TV " + f(tv_worst) + ", max |z| over 10^5 chains " + f(zmax)};
}

Outcome c4() {
  long checked = 0, violations = 0;
  // every antichain of 2^[4]
  std::vector<std::vector<Mask>> antichains;
  for (std::uint32_t fam = 0; fam < (1u << 16); ++fam) {
    std::vector<Mask> m;
    for (Mask a = 0; a < 16; ++a)
      if (fam >> a & 1) m.push_back(a);
    bool anti = true;
    for (std::size_t i = 0; i < m.size() && anti; ++i)
      for (std::size_t j = i + 1; j < m.size() && anti; ++j)
        anti = (m[i] & m[j]) != m[i] && (m[i] & m[j]) != m[j];
    if (anti) antichains.push_back(m);
  }
  for (std::size_t i = 0; i < antichains.size(); ++i)
    for (int r = 0; r < 10; ++r) {
      LymSums s = lym_sums(SubsetFamily(4, antichains[i]), random_law(4, 0.05 + 0.045 * r, 404, i * 10 + std::size_t(r)));
      ++checked;
      violations += s.weighted > s.weighted_bound * (1 + 1e-12);
    }
  long random_ok = 0;
  for (std::uint64_t r = 0; random_ok < 500 && r < 100000; ++r) {
    Stream rng(405, 0, r);
    int n = 2 + int(rng.below(19));
    SubsetFamily fam = random_family(n, 1 + int(rng.below(12)), false, 406, r);
    if (fam.members.empty()) continue;
    ProductLaw law = random_law(n, rng.uniform(0.05, 0.5), 407, r);
    LymSums s = lym_sums(fam, law);
    if (!(s.kappa > 0)) continue;
    ++random_ok;
    ++checked;
    violations += s.weighted > s.weighted_bound * (1 + 1e-12);
  }
  return {violations == 0 && random_ok == 500 && antichains.size() == 168,
          std::to_string(antichains.size()) + " antichains, " + std::to_string(random_ok) + " random kappa-Sperner families, " +
              std::to_string(checked) + " checks, " + std::to_string(violations) + " violations"};
}

Outcome c5() {
  Outcome o;
  for (double beta : {0.1, 0.3, 0.5}) {
    std::vector<double> x, y;
    for (int N = 16; N <= 4096; N *= 2) {
      auto l = layer_law(ProductLaw(std::vector<double>(std::size_t(N), beta)));
      double mx = 0;
      for (double v : l) mx = std::max(mx, v);
      x.push_back(std::log(double(N)));
      y.push_back(std::log(mx * std::sqrt(beta * (1 - beta) * N)));
    }
    double slope = least_squares(x, y).slope;
    o.pass = o.pass && slope <= 0.05;
    o.detail += (o.detail.empty() ? "" : ", ") + std::string("slope(beta=") + f(beta) + ")=" + f(slope);
  }
  return o;
}

Outcome c6() {
  long violations = 0, checks = 0;
  for (const auto& [name, d] : default_registry().distributions) {
    auto vb = variance_ac_bounds(d);
    ++checks;
    violations += !(vb.pz_holds && vb.pz_actual >= vb.pz_bound);
    for (int i = 1; i <= 100; ++i) {
      double g = d.M() * i / 100.0;
      ++checks;
      violations += vb.var < ac_implied_variance(d, g) * (1 - 1e-12);
    }
  }
  return {violations == 0, std::to_string(checks) + " checks, " + std::to_string(violations) + " violations"};
}

Outcome c7() {
  double res = 0, lin = 0, zero = 0, alt = 0;
  for (int r = 0; r < 200; ++r) {
    Stream rng(707, 0, std::uint64_t(r));
    int a = 3 + int(rng.below(30)), b = 3 + int(rng.below(6));
    TiltedRect R = tilted_rect(0, a - 1, 0, b - 1);
    TiltedField V = sample_tilted_potential(r % 2 ? bern() : EnsembleSpec::iid(SiteDistribution::uniform(0, 1)), R, {}, 708,
                                            std::uint64_t(r));
    double E = rng.uniform(0, 9);
    auto u = random_west_data(R, 709, std::uint64_t(r), false), v = random_west_data(R, 710, std::uint64_t(r), false);
    auto pu = extend_from_west(R, u, E, V), pv = extend_from_west(R, v, E, V);
    res = std::max({res, eigen_residual(pu, V, E), eigen_residual(pv, V, E)});
    double al = rng.normal(), be = rng.normal();
    WestBoundaryData w = u;
    for (auto& [k, x] : w) x = al * u.at(k) + be * v.at(k);
    auto pw = extend_from_west(R, w, E, V);
    double sc = std::max({1.0, std::abs(al) * pu.sup(), std::abs(be) * pv.sup()});
    for (std::size_t i = 0; i < pw.values.size(); ++i)
      lin = std::max(lin, std::abs(pw.values[i] - al * pu.values[i] - be * pv.values[i]) / sc);
    WestBoundaryData z = u;
    for (auto& [k, x] : z) x = 0;
    zero = std::max(zero, extend_from_west(R, z, E, V).sup());
    auto d0 = random_west_data(R, 711, std::uint64_t(r), true);
    for (int s = 2; s < a; ++s)
      for (int t = 2; t < b; ++t)
        if ((s + t) % 2 == 0) alt = std::max(alt, zero_column_formula_check(R, V, d0, E, {s, t}));
  }
  return {res <= 1e-10 && lin <= 1e-10 && zero == 0.0 && alt <= 1e-9,
          "residual " + f(res) + ", linearity " + f(lin) + ", zero-data sup " + f(zero) + ", alternating sum " + f(alt)};
}

Outcome c8() {
  Outcome o;
  for (auto [suite, want] : std::vector<std::pair<SuiteTally (*)(long, std::uint64_t), long>>{
           {eigenvar_suite, 10000}, {taobound_suite, 1000}, {contres_suite, 1000}, {detmsa_suite, 100}}) {
    SuiteTally t = suite(want, 808);
    o.pass = o.pass && t.applicable == want && t.violations == 0;
    o.detail += (o.detail.empty() ? "" : "; ") + t.lemma + " " + std::to_string(t.applicable) + "/" + std::to_string(want) +
                " applicable, " + std::to_string(t.violations) + " violations";
  }
  return o;
}

Outcome c9() {
  std::vector<McEstimate> est;
  std::string d;
  for (int L : {8, 16, 32}) {
    est.push_back(wegner_mc(bern(), Square{{0, 0}, L}, 0.05, std::pow(double(L), 0.9), {}, 2000, 909));
    const auto& e = est.back();
    d += (d.empty() ? "" : ", ") + std::string("L=") + std::to_string(L) + " p=" + f(e.p_hat) + " [" + f(e.ci.lo) + "," +
         f(e.ci.hi) + "]";
  }
  bool monotone = est[0].p_hat >= est[1].p_hat && est[1].p_hat >= est[2].p_hat;
  bool separated = est[2].ci.hi < est[0].ci.lo;
  return {monotone && separated, d + (separated ? "" : "; Wilson intervals at L=8 and L=32 overlap")};
}

Outcome c10() {
  std::vector<double> p;
  std::string d;
  for (int L : {12, 16, 20, 24}) {
    auto e = low_spectrum_probability(bern(), L, 0.05, 1000, 1010);
    p.push_back(e.p_hat);
    double s = std::sin(3.14159265358979323846 / (2.0 * (L + 1)));
    d += (d.empty() ? "" : ", ") + std::string("L=") + std::to_string(L) + " p=" + f(e.p_hat) + " (floor " + f(8 * s * s) + ")";
  }
  return {p.front() > p.back(), d};
}

Outcome c11() {
  Outcome o;
  auto s = build_schedule(0.05, 0.04, 0.02, 1 << 10, 2);
  bool sched = s.log2L.size() == 2 && s.log2L[1] == 14;
  // planted fixtures against explicit chain enumeration
  long mismatches = 0;
  for (int r = 0; r < 200; ++r) {
    Stream rng(1111, 0, std::uint64_t(r));
    Square top{{16 * int(rng.below(4)), 16 * int(rng.below(4))}, 16};
    double p = rng.uniform(0.05, 0.95);
    // half-aligned squares, overlaps included
    auto corners = [](const Square& q, int side) {
      std::vector<Site> out;
      for (int y = q.y0(); y + side - 1 <= q.y1(); y += side / 2)
        for (int x = q.x0(); x + side - 1 <= q.x1(); x += side / 2) out.push_back({x, y});
      return out;
    };
    std::vector<ScaleVerdicts> lv;
    for (int side : {8, 4, 2}) {
      ScaleVerdicts v;
      v.side = side;
      for (Site c : corners(top, side)) v.bad[c] = rng.uniform() < p;
      lv.push_back(v);
    }
    long chains = 0;
    std::set<Site> bottoms;
    std::function<void(const Square&, std::size_t)> walk = [&](const Square& q, std::size_t j) {
      for (Site c : corners(q, lv[j].side)) {
        if (!lv[j].bad.at(c)) continue;
        if (j + 1 == lv.size())
          ++chains, bottoms.insert(c);
        else
          walk(Square{c, lv[j].side}, j + 1);
      }
    };
    walk(top, 0);
    auto hc = hereditary_bad_count(top, lv);
    mismatches += hc.chains != chains || hc.distinct != long(bottoms.size());
  }
  long runs = 0, growth_fail = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed)
    for (bool thin : {false, true}) {
      DeskMsaConfig cfg;
      cfg.domain = 32;
      cfg.scales = {2, 4, 8, 16, 32};
      cfg.M_tilde = 1;
      cfg.eps = 0.5;
      cfg.thin = thin;
      cfg.trials = 2;
      auto res = run_desk_msa(cfg, bern(), 1112 + seed);
      ++runs;
      for (const auto& row : res.rows) growth_fail += !row.growth_ok;
    }
  o.pass = sched && mismatches == 0 && growth_fail == 0;
  o.detail = "schedule L1=2^" + std::to_string(s.log2L.size() > 1 ? s.log2L[1] : -1) + ", " + std::to_string(mismatches) +
             " hereditary mismatches over 200 fixtures, " + std::to_string(growth_fail) + " growth-bound failures over " +
             std::to_string(runs) + " runs";
  return o;
}

std::map<std::string, std::string> run_into(const json& cfg, const std::filesystem::path& dir) {
  std::filesystem::remove_all(dir);
  RunResult r = run_config(cfg, dir.string());
  std::map<std::string, std::string> out;
  if (r.exit_code != 0) return out;
  for (const auto& name : r.outputs) {
    std::ifstream in(dir / name, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[name] = s.str();
  }
  std::filesystem::remove_all(dir);
  return out;
}

Outcome c12() {
  const std::vector<json> cfgs = {
      {{"experiment", "decompose"}, {"seed", 12}, {"trials", 1}, {"distribution", "three_atom"}, {"gamma", 0.25}},
      {{"experiment", "chain"}, {"seed", 12}, {"trials", 5000}, {"N", 8}, {"beta", 0.2}},
      {{"experiment", "sperner"}, {"seed", 12}, {"trials", 50}, {"N", 12}},
      {{"experiment", "spectrum"}, {"seed", 12}, {"trials", 5}, {"side", 10}},
      {{"experiment", "wegner"}, {"seed", 12}, {"trials", 100}, {"sides", {8, 16}}},
      {{"experiment", "lifshitz"}, {"seed", 12}, {"trials", 50}, {"sides", {12, 16}}},
      {{"experiment", "ni"}, {"seed", 12}, {"trials", 50}},
      {{"experiment", "uc"}, {"seed", 12}, {"trials", 10}},
      {{"experiment", "msa"}, {"seed", 12}, {"trials", 2}, {"domain", 32}},
      {{"experiment", "lemma-check"}, {"seed", 12}, {"trials", 20}},
  };
  const auto tmp = std::filesystem::temp_directory_path();
  long files = 0, differ = 0, failed = 0;
  for (const auto& cfg : cfgs) {
    auto a = run_into(cfg, tmp / "rso_acc_a"), b = run_into(cfg, tmp / "rso_acc_b");
    if (a.empty()) ++failed;
    files += long(a.size());
    differ += a != b;
  }
  return {failed == 0 && differ == 0, std::to_string(cfgs.size()) + " configs, " + std::to_string(files) +
                                          " data files, " + std::to_string(differ) + " differing, " +
                                          std::to_string(failed) + " failed runs"};
}

struct Criterion {
  const char* id;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"C1", "geometric resolvent identity", 5, c1},
      {"C2", "Bernoulli decomposition", 1, c2},
      {"C3", "chain sampler marginals", 60, c3},
      {"C4", "weighted LYM inequality", 120, c4},
      {"C5", "layer concentration", 60, c5},
      {"C6", "Paley-Zygmund and variance floor", 1, c6},
      {"C7", "tilted extension", 30, c7},
      {"C8", "deterministic lemma checkers", 300, c8},
      {"C9", "Wegner trend", 1800, c9},
      {"C10", "low-spectrum scarcity", 1200, c10},
      {"C11", "multiscale bookkeeping", 60, c11},
      {"C12", "reproducibility", 600, c12},
  };
  std::set<std::string> want(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& c : all) {
    if (!want.empty() && !want.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < c.limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("[%s] %s %s: %s; %.2fs (limit %gs)%s\n", pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), dt,
                c.limit_s, in_time ? "" : " over time");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
