#include "rso/msa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Sparse>

#include "rso/rng.hpp"

namespace rso {

namespace {

bool dyadic(long v) { return v >= 1 && (v & (v - 1)) == 0; }

int ilog2(long v) {
  int r = 0;
  while ((1L << r) < v) ++r;
  return r;
}

// aligned squares of the given dyadic side inside q
std::vector<Square> aligned_inside(const Square& q, int side) {
  std::vector<Square> out;
  const int h = std::max(1, side / 2);
  auto first = [h](int lo) { return lo >= 0 ? (lo + h - 1) / h * h : -((-lo) / h * h); };
  for (int y = first(q.y0()); y + side - 1 <= q.y1(); y += h)
    for (int x = first(q.x0()); x + side - 1 <= q.x1(); x += h) out.push_back(Square{{x, y}, side, true});
  return out;
}

FrozenAssignment frozen_values(const SiteSet& F, const Square& sq, const PotentialField& V) {
  FrozenAssignment a;
  for (auto it = F.lower_bound({sq.x0(), std::numeric_limits<int>::min()}); it != F.end() && it->x <= sq.x1(); ++it)
    if (sq.contains(*it)) a.values[*it] = V.at(*it);
  return a;
}

}  // namespace

double ScaleSchedule::L(int k) const { return std::exp2(double(log2L[std::size_t(k)])); }

int mtilde(double eps, double delta) { return int(std::ceil(-std::log2(delta) / (1 - 6 * eps) - 1e-9)); }

ScaleSchedule build_schedule(double eps, double nu, double delta, long L0, int depth, double C_eta) {
  if (!(1 > eps && eps > nu && nu > delta && delta > 0))
    throw std::invalid_argument("build_schedule: need 1 > eps > nu > delta > 0");
  if (!(eps < 1.0 / 6)) throw std::invalid_argument("build_schedule: need eps < 1/6 for growing scales");
  if (!dyadic(L0) || L0 < 2) throw std::invalid_argument("build_schedule: L0 must be dyadic and >= 2");
  if (depth < 1) throw std::invalid_argument("build_schedule: depth must be positive");
  ScaleSchedule s;
  s.eps = eps, s.nu = nu, s.delta = delta, s.C_eta = C_eta;
  s.M_tilde = mtilde(eps, delta);
  s.log2L.push_back(ilog2(L0));
  for (int k = 1; k < depth; ++k) {
    int prev = s.log2L.back();
    int next = int(std::floor(prev / (1 - 6 * eps) + 1e-9));
    if (next <= prev) throw std::invalid_argument("build_schedule: scales do not grow");
    if (next > 1000) throw std::invalid_argument("build_schedule: scale exponent overflow");
    s.log2L.push_back(next);
  }
  double sum = 0;
  for (int k = 0; k < depth; ++k) {
    const double lk = s.log2L[std::size_t(k)];
    const double floor_m = std::exp2(-delta * lk);
    double m = k <= s.M_tilde ? floor_m : s.m.back() - std::exp2(-nu * lk);
    if (!(m >= floor_m * (1 - 1e-12) && m <= 1)) throw std::invalid_argument("build_schedule: decay rates infeasible");
    s.m.push_back(m);
    sum += std::exp2(-eps * lk);
    s.eta.push_back(eps * eps + C_eta * sum);
  }
  s.eta_ok = std::all_of(s.eta.begin(), s.eta.end(), [&](double e) { return e < eps; });
  auto window = [&](int M) {
    for (int k = 0; k + M < depth; ++k) {
      double a = s.log2L[std::size_t(k)], b = s.log2L[std::size_t(k + M)];
      if (!(delta / 4 * b <= a && a <= delta * b)) return false;
    }
    return true;
  };
  s.window_ok = window(s.M_tilde);
  for (int M = 1; M < depth; ++M)
    if (window(M)) {
      s.smallest_window_M = M;
      break;
    }
  return s;
}

int base_pitch(double eps) {
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("base_pitch: eps outside (0,1]");
  return int(std::ceil(2.0 / (eps * eps) - 1e-9));
}

FrozenSetState base_frozen_set(double eps, const Square& domain, bool thin) {
  FrozenSetState st;
  st.pitch = base_pitch(eps);
  st.eta = eps * eps;
  const int P = st.pitch;
  auto first = [P](int lo) { return lo >= 0 ? (lo + P - 1) / P * P : -((-lo) / P * P); };
  for (int y = first(domain.y0()); y <= domain.y1(); y += P)
    for (int x = first(domain.x0()); x <= domain.x1(); x += P)
      if (!thin || ((x / P + y / P) % 2 + 2) % 2 == 0) st.sites.insert({x, y});
  return st;
}

BoxClassification classify_square(const Square& sq, const GoodnessTest& test, const FrozenAssignment& frozen,
                                  const EnsembleSpec& spec, std::uint64_t seed) {
  if (sq.side > 64) throw std::invalid_argument("classify_square: side above the desk cap 64");
  if (test.trials < 1 || test.n_energies < 1) throw std::invalid_argument("classify_square: need trials and energies");
  BoxClassification c;
  c.square = sq;
  long free_sites = 0;
  for (int i = 0; i < int(sq.area()); ++i) free_sites += !frozen.contains(sq.site(i));
  const long trials = free_sites == 0 ? 1 : test.trials;
  const std::uint64_t key = key_combine(key_combine(seed, pack_site(sq.x0(), sq.y0())), std::uint64_t(sq.side));
  const int n = int(sq.area());
  std::vector<double> logb(std::size_t(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      logb[std::size_t(x) * n + y] =
          std::log(2.0) + test.exponent - test.m * site_distance(sq.site(x), sq.site(y), Metric::Euclidean);
  c.good = true;
  for (long t = 0; t < trials && c.good; ++t) {
    ++c.trials_used;
    Hamiltonian h = assemble(sq, sample_potential(spec, sq, frozen, key, std::uint64_t(t)));
    for (int e = 0; e < test.n_energies && c.good; ++e) {
      double E = test.n_energies == 1 ? 0.0 : test.Ebar_max * e / (test.n_energies - 1);
      Eigen::MatrixXd R;
      try {
        R = resolvent(h, E);
      } catch (const ResonanceError&) {
        c.good = false;
        c.worst_log_margin = INFINITY;
        break;
      }
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          c.worst_log_margin = std::max(c.worst_log_margin, std::log(std::abs(R(x, y))) - logb[std::size_t(x) * n + y]);
      if (c.worst_log_margin > 0) c.good = false;
    }
  }
  return c;
}

HereditaryCount hereditary_bad_count(const Square& sq, const std::vector<ScaleVerdicts>& levels) {
  HereditaryCount hc;
  if (levels.empty()) return hc;
  const std::size_t M = levels.size();
  std::vector<std::vector<Square>> sq_at(M);
  std::vector<std::vector<char>> bad(M);
  for (std::size_t j = 0; j < M; ++j) {
    sq_at[j] = aligned_inside(sq, levels[j].side);
    for (const auto& q : sq_at[j]) {
      auto it = levels[j].bad.find(q.corner);
      if (it == levels[j].bad.end()) throw std::invalid_argument("hereditary_bad_count: missing classification");
      bad[j].push_back(it->second);
    }
  }
  // chain counts from the bottom
  std::vector<std::vector<long>> cnt(M);
  cnt[M - 1].assign(sq_at[M - 1].size(), 0);
  for (std::size_t i = 0; i < sq_at[M - 1].size(); ++i) cnt[M - 1][i] = bad[M - 1][i];
  for (std::size_t j = M - 1; j-- > 0;) {
    cnt[j].assign(sq_at[j].size(), 0);
    for (std::size_t i = 0; i < sq_at[j].size(); ++i) {
      if (!bad[j][i]) continue;
      for (std::size_t l = 0; l < sq_at[j + 1].size(); ++l)
        if (sq_at[j][i].contains(sq_at[j + 1][l])) cnt[j][i] += cnt[j + 1][l];
    }
  }
  for (long v : cnt[0]) hc.chains += v;
  // bottoms reachable by a bad chain from the top
  std::vector<char> reach(bad[0]);
  for (std::size_t j = 1; j < M; ++j) {
    std::vector<char> next(sq_at[j].size(), 0);
    for (std::size_t l = 0; l < sq_at[j].size(); ++l) {
      if (!bad[j][l]) continue;
      for (std::size_t i = 0; i < sq_at[j - 1].size() && !next[l]; ++i)
        if (reach[i] && sq_at[j - 1][i].contains(sq_at[j][l])) next[l] = 1;
    }
    reach = std::move(next);
  }
  for (char r : reach) hc.distinct += r;
  return hc;
}

FrozenSetState freeze_update(const FrozenSetState& prev, const std::vector<ReadyCover>& ready, double eta_next, int N,
                             double alpha, int L_prev, const std::vector<TiltedRect>& regularity_probes,
                             FreezeReport* report) {
  FreezeReport rep;
  FrozenSetState next = prev;
  next.k = prev.k + 1;
  next.eta = eta_next;
  const double per_square = double(N) * (alpha * L_prev) * (alpha * L_prev);
  for (const auto& rc : ready) {
    double area = 0;
    for (const auto& c : rc.covers) {
      area += double(c.area());
      for (int i = 0; i < int(c.area()); ++i) next.sites.insert(c.site(i));
    }
    if (long(rc.covers.size()) > N || area > per_square) rep.per_square_ok = false;
  }
  rep.added = long(next.sites.size()) - long(prev.sites.size());
  rep.bound = long(ready.size()) * long(per_square);
  if (!rep.per_square_ok) rep.flags.push_back("cover area above N (alpha L)^2 for a ready square");
  for (const auto& q : regularity_probes) {
    RegularityVerdict v = regularity_check(next.sites, q, std::min(1.0, eta_next));
    if (v.kind == RegularityVerdict::CertifiedIrregular) {
      rep.regularity_ok = false;
      rep.flags.push_back("frozen set not eta-regular on a probe square");
    } else if (v.kind == RegularityVerdict::Unknown) {
      rep.flags.push_back("regularity undecided on a probe square");
    }
  }
  if (report) *report = std::move(rep);
  return next;
}

double DetMsaScales::m_tilde() const { return m - std::pow(double(L5), -nu); }

DetMsaResult deterministic_propagation(const DetMsaInstance& inst) {
  DetMsaResult out;
  const auto& sc = inst.sc;
  const Square& box = inst.box;
  auto gate = [&](const char* g) {
    out.gate = g;
    return out;
  };
  // L3 only weighs the defect-graph shortcuts, so it sits outside the chain
  const int Ls[6] = {sc.L0, sc.L1, sc.L2, sc.L4, sc.L5, sc.L6};
  for (int i = 0; i < 6; ++i)
    if (Ls[i] < 1 || (i > 0 && Ls[i] > Ls[i - 1])) return gate("scales");
  if (sc.L3 < 1 || sc.L3 > sc.L2) return gate("scales");
  if (box.side != sc.L0 || long(inst.V.size()) != box.area()) return gate("scales");
  if (!(sc.nu > 0 && sc.m <= 1 && sc.m >= 2 * std::pow(double(sc.L5), -sc.nu))) return gate("decay");
  Hamiltonian h = assemble(box, inst.V);
  for (std::size_t i = 0; i < inst.defects.size(); ++i) {
    const Square& d = inst.defects[i];
    if (d.side != sc.L2 || !box.contains(d)) return gate("defects");
    for (std::size_t j = 0; j < i; ++j)
      if (d.intersects(inst.defects[j])) return gate("defects");
    try {
      if (resolvent_norm(h.restrict_to(d), inst.E) > std::exp(double(sc.L4))) return gate("defects");
    } catch (const ResonanceError&) {
      return gate("defects");
    }
  }
  // coverage: deep inside a defect or deep inside a good L5 square
  std::map<Site, int> good_cache;  // corner -> 1 good, 0 not
  auto good = [&](const Square& q) {
    auto it = good_cache.find(q.corner);
    if (it != good_cache.end()) return it->second == 1;
    bool ok = true;
    try {
      Eigen::MatrixXd R = resolvent(h.restrict_to(q), inst.E);
      for (int y = 0; y < int(q.area()) && ok; ++y)
        for (int z = 0; z < int(q.area()) && ok; ++z)
          if (std::abs(R(y, z)) > std::exp(sc.L6 - sc.m * site_distance(q.site(y), q.site(z), Metric::Euclidean))) ok = false;
    } catch (const ResonanceError&) {
      ok = false;
    }
    good_cache[q.corner] = ok;
    return ok;
  };
  std::set<Site> used;
  for (int i = 0; i < int(box.area()); ++i) {
    Site x = box.site(i);
    Square xs{x, 1};
    bool covered = false;
    for (const auto& d : inst.defects)
      if (d.contains(x) && dist_to_complement(box, d, xs) >= d.side / 8.0) covered = true;
    for (int cy = x.y - sc.L5 + 1; cy <= x.y && !covered; ++cy)
      for (int cx = x.x - sc.L5 + 1; cx <= x.x && !covered; ++cx) {
        Square q{{cx, cy}, sc.L5};
        if (!box.contains(q) || dist_to_complement(box, q, xs) < sc.L5 / 8.0) continue;
        if (good(q)) {
          covered = true;
          used.insert(q.corner);
        }
      }
    if (!covered) return gate("coverage");
  }
  out.applicable = true;
  out.good_squares_used = long(used.size());

  const double mt = sc.m_tilde();
  const int n = h.n();
  Eigen::MatrixXd R;
  try {
    R = resolvent(h, inst.E);
  } catch (const ResonanceError&) {
    out.worst_margin = INFINITY;
    return out;
  }
  out.worst_margin = -INFINITY;
  out.empirical_m = INFINITY;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      double d = site_distance(box.site(x), box.site(y), Metric::Euclidean);
      double lr = std::log(std::abs(R(x, y)));
      out.worst_margin = std::max(out.worst_margin, lr + mt * d - sc.L1);
      if (x != y && std::isfinite(lr)) out.empirical_m = std::min(out.empirical_m, (sc.L1 - lr) / d);
    }
  out.holds = out.worst_margin <= 1e-9;
  // defect-graph weighted sup, y on a stride-3 sample
  try {
    DefectDistance dd(DefectGraph{box, inst.defects, sc.L3});
    out.alpha_log = -INFINITY;
    for (int x = 0; x < n; ++x)
      for (int y = x % 3; y < n; y += 3)
        out.alpha_log = std::max(out.alpha_log, std::log(std::abs(R(x, y))) + mt * double(dd(box.site(x), box.site(y))));
  } catch (const std::exception&) {
    out.alpha_log = NAN;
  }
  return out;
}

DetMsaInstance random_detmsa_instance(std::uint64_t seed, std::uint64_t replica, int max_side) {
  Stream rng(seed, 0x64657473ULL, replica);
  DetMsaInstance inst;
  auto& sc = inst.sc;
  sc.L0 = (max_side >= 32 && rng.uniform() < 0.5) ? 32 : 16;
  sc.L1 = 16;
  sc.L2 = (sc.L0 == 32 && rng.uniform() < 0.3) ? 16 : 8;
  sc.L3 = 1, sc.L4 = 4, sc.L5 = 4, sc.L6 = 2;
  sc.m = 1, sc.nu = 0.5;
  inst.box = Square{{0, 0}, sc.L0};
  const int K = int(rng.below(3));
  for (int tries = 0; tries < 50 && int(inst.defects.size()) < K; ++tries) {
    Square d{{int(rng.below(std::uint64_t(sc.L0 - sc.L2 + 1))), int(rng.below(std::uint64_t(sc.L0 - sc.L2 + 1)))}, sc.L2};
    bool clear = true;
    for (const auto& o : inst.defects) clear = clear && !d.intersects(o);
    if (clear) inst.defects.push_back(d);
  }
  inst.V.resize(std::size_t(inst.box.area()));
  for (int i = 0; i < int(inst.box.area()); ++i) {
    Site p = inst.box.site(i);
    bool core = false;
    for (const auto& d : inst.defects) {
      int g = (d.side + 7) / 8;
      core = core || Square{{d.x0() + g, d.y0() + g}, d.side - 2 * g}.contains(p);
    }
    inst.V[std::size_t(i)] = core ? rng.uniform(0, 1) : rng.uniform(4, 8);
  }
  inst.E = rng.uniform(0, 0.5);
  return inst;
}

NetProbe initial_scale_probe(const EnsembleSpec& spec, double kappa, double R, const Square& box, const SiteSet& F,
                             long trials, std::uint64_t seed, bool relaxed) {
  NetProbe out;
  out.R_tilde = R * R * std::log(R);
  if (!(R > 1) || trials < 1) throw std::invalid_argument("initial_scale_probe: need R > 1 and trials >= 1");
  if (!relaxed && box.side < out.R_tilde) throw std::invalid_argument("initial_scale_probe: box side below R^2 log R");
  const int L = box.side, n = int(box.area()), r = int(std::floor(R));
  std::vector<char> inF(std::size_t(n), 0);
  for (const Site& p : F)
    if (box.contains(p)) inF[std::size_t(box.index(p))] = 1;
  // exact union bound
  for (int i = 0; i < n; ++i) {
    Site y = box.site(i);
    double prod = 1;
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) {
        Site f{y.x + dx, y.y + dy};
        if (dx * dx + dy * dy > R * R || !box.contains(f) || !inF[std::size_t(box.index(f))]) continue;
        prod *= spec.at(f).cdf_left(kappa);
      }
    out.union_bound += prod;
  }
  out.trials = trials;
  const Site x0{box.x0() + L / 2, box.y0() + L / 2};
  double sumC = 0, sumc = 0;
  for (long t = 0; t < trials; ++t) {
    PotentialField V = sample_potential(spec, box, {}, seed, std::uint64_t(t));
    std::vector<char> X(std::size_t(n), 0);
    bool nonempty = false;
    for (int i = 0; i < n; ++i)
      if (inF[std::size_t(i)] && V.v[std::size_t(i)] >= kappa) X[std::size_t(i)] = 1, nonempty = true;
    bool net = nonempty;
    for (int i = 0; i < n && net; ++i) {
      Site y = box.site(i);
      bool hit = false;
      for (int dy = -r; dy <= r && !hit; ++dy)
        for (int dx = -r; dx <= r && !hit; ++dx) {
          Site f{y.x + dx, y.y + dy};
          hit = dx * dx + dy * dy <= R * R && box.contains(f) && X[std::size_t(box.index(f))];
        }
      net = hit;
    }
    if (!net) continue;
    ++out.nets;
    // column of H^{-1} at the centre by sparse Cholesky
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < n; ++i) {
      int x = i % L, y = i / L;
      trip.emplace_back(i, i, 4.0 + V.v[std::size_t(i)]);
      if (x + 1 < L) trip.emplace_back(i, i + 1, -1.0), trip.emplace_back(i + 1, i, -1.0);
      if (y + 1 < L) trip.emplace_back(i, i + L, -1.0), trip.emplace_back(i + L, i, -1.0);
    }
    Eigen::SparseMatrix<double> H(n, n);
    H.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(H);
    if (solver.info() != Eigen::Success) continue;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(box.index(x0)) = 1;
    Eigen::VectorXd g = solver.solve(e);
    std::map<int, double> env;
    for (int i = 0; i < n; ++i) {
      double lg = std::log(std::abs(g(i)));
      if (!std::isfinite(lg)) continue;
      int bin = int(std::floor(site_distance(x0, box.site(i), Metric::Euclidean)));
      auto it = env.find(bin);
      if (it == env.end() || lg > it->second) env[bin] = lg;
    }
    std::vector<double> xs, ys;
    for (auto [b, v] : env)
      if (b >= 1) xs.push_back(b), ys.push_back(v);
    if (xs.size() < 2) continue;
    LineFit lf = least_squares(xs, ys);
    sumC += lf.intercept / out.R_tilde;
    sumc += -lf.slope * out.R_tilde;
    ++out.fitted;
  }
  out.net_frequency = double(out.nets) / double(out.trials);
  if (out.fitted > 0) out.C = sumC / double(out.fitted), out.c = sumc / double(out.fitted);
  return out;
}

DeskMsaResult run_desk_msa(const DeskMsaConfig& cfg, const EnsembleSpec& spec, std::uint64_t seed) {
  const auto& sc = cfg.scales;
  if (sc.empty() || cfg.M_tilde < 1 || cfg.N < 1 || !dyadic(cfg.cover_alpha))
    throw std::invalid_argument("run_desk_msa: need scales, M_tilde >= 1, N >= 1, dyadic cover_alpha");
  for (std::size_t k = 0; k < sc.size(); ++k)
    if (!dyadic(sc[k]) || sc[k] < 2 || sc[k] > std::min(cfg.domain, 64) || (k > 0 && sc[k] <= sc[k - 1]))
      throw std::invalid_argument("run_desk_msa: scales must be increasing dyadic sides within the domain");
  if (!(cfg.eps > 0 && cfg.eps < 1)) throw std::invalid_argument("run_desk_msa: eps outside (0,1)");
  const Square domain{{0, 0}, cfg.domain};
  const PotentialField V = sample_potential(spec, domain, {}, seed, 0);
  FrozenSetState F = base_frozen_set(cfg.eps, domain, cfg.thin);
  std::vector<TiltedRect> probes;
  if (cfg.domain >= 4) {
    const int h = cfg.domain / 2 - 1;
    probes.push_back(tilted_rect(cfg.domain - 1 - h, cfg.domain - 1 + h, -h, h));
  }
  DeskMsaResult res;
  std::vector<ScaleVerdicts> verdicts;
  double eta_sum = 0, m = 0;
  for (std::size_t k = 0; k < sc.size(); ++k) {
    const int Lk = sc[k];
    DeskScaleRow row;
    row.k = int(k);
    row.side = Lk;
    eta_sum += std::pow(double(Lk), -cfg.eps);
    row.eta = cfg.eps * cfg.eps + cfg.C_eta * eta_sum;
    const double floor_m = std::pow(double(Lk), -cfg.delta);
    m = (int(k) <= cfg.M_tilde) ? floor_m : std::max(floor_m, m - std::pow(double(Lk), -cfg.nu));
    row.m = m;
    std::vector<Square> squares = aligned_inside(domain, Lk);
    std::map<Site, std::pair<bool, HereditaryCount>> readiness;
    if (int(k) > cfg.M_tilde) {
      std::vector<ScaleVerdicts> levels(verdicts.rbegin(), verdicts.rbegin() + cfg.M_tilde);
      std::vector<ReadyCover> ready;
      for (const auto& q : squares) {
        HereditaryCount hc = hereditary_bad_count(q, levels);
        std::vector<Square> bad_sub;
        for (const auto& s : aligned_inside(q, sc[k - 1]))
          if (verdicts.back().bad.at(s.corner)) bad_sub.push_back(s);
        bool is_ready = hc.distinct < cfg.N && long(bad_sub.size()) < cfg.N;
        if (is_ready && !bad_sub.empty()) {
          try {
            CoverResult cr = cover_defects(q, bad_sub, 2 * sc[k - 1], cfg.cover_alpha);
            std::vector<Square> uniq;
            for (const auto& c : cr.covers)
              if (std::find(uniq.begin(), uniq.end(), c) == uniq.end()) uniq.push_back(c);
            ready.push_back({q, uniq});
          } catch (const std::exception&) {
            is_ready = false;
          }
        } else if (is_ready) {
          ready.push_back({q, {}});
        }
        readiness[q.corner] = {is_ready, hc};
        row.max_hereditary = std::max(row.max_hereditary, hc.distinct);
        (is_ready ? row.ready : row.not_ready) += 1;
      }
      FreezeReport rep;
      F = freeze_update(F, ready, row.eta, cfg.N, 2.0 * cfg.cover_alpha, sc[k - 1], probes, &rep);
      row.added = rep.added;
      row.growth_bound = rep.bound;
      row.growth_ok = rep.per_square_ok && rep.added <= rep.bound;
      row.regularity_ok = rep.regularity_ok;
    } else {
      F.k = int(k);
      F.eta = row.eta;
      for (const auto& q : probes)
        row.regularity_ok =
            row.regularity_ok && regularity_check(F.sites, q, std::min(1.0, row.eta)).kind != RegularityVerdict::CertifiedIrregular;
    }
    row.frozen = long(F.sites.size());
    GoodnessTest test;
    test.exponent = std::pow(double(Lk), 1 - cfg.eps);
    test.m = m;
    test.Ebar_max = cfg.Ebar_max;
    test.n_energies = cfg.n_energies;
    test.trials = cfg.trials;
    ScaleVerdicts sv;
    sv.side = Lk;
    for (const auto& q : squares) {
      BoxClassification c = classify_square(q, test, frozen_values(F.sites, q, V), spec, key_combine(seed, k));
      auto it = readiness.find(q.corner);
      if (it != readiness.end()) {
        c.ready = it->second.first;
        c.hereditary_chains = it->second.second.chains;
        c.hereditary_distinct = it->second.second.distinct;
      }
      sv.bad[q.corner] = !c.good;
      row.bad += !c.good;
      res.classes.push_back(c);
    }
    row.squares = long(squares.size());
    verdicts.push_back(std::move(sv));
    res.rows.push_back(row);
  }
  return res;
}

nlohmann::json to_json(const ScaleSchedule& s) {
  return {{"eps", s.eps},
          {"nu", s.nu},
          {"delta", s.delta},
          {"C_eta", s.C_eta},
          {"M_tilde", s.M_tilde},
          {"log2L", s.log2L},
          {"m", s.m},
          {"eta", s.eta},
          {"window_ok", s.window_ok},
          {"smallest_window_M", s.smallest_window_M},
          {"eta_ok", s.eta_ok}};
}

}  // namespace rso
