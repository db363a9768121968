#include "rso/tilted.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <Eigen/Dense>

#include "rso/rng.hpp"
#include "rso/spectral.hpp"

namespace rso {

namespace {

bool on_lattice(int s, int t) { return ((s + t) & 1) == 0; }

bool is_west(const TiltedRect& r, int s, int t) { return s <= r.s.lo + 1 || t <= r.t.lo + 1; }

void require_dims(const TiltedRect& r) {
  if (r.s.size() < 3 || r.t.size() < 3) throw std::invalid_argument("tilted extension: rectangle needs a, b >= 3");
}

void require_potential(const TiltedRect& r, const TiltedField& V) {
  if (!(V.rect == r) || V.values.size() != std::size_t(r.s.size()) * r.t.size())
    throw std::invalid_argument("tilted extension: potential not defined on the rectangle");
}

std::vector<std::pair<int, int>> sweep_order(const TiltedRect& r) {
  std::vector<std::pair<int, int>> out;
  for (int s = r.s.lo + 2; s <= r.s.hi; ++s)
    for (int t = r.t.lo + 2; t <= r.t.hi; ++t)
      if (on_lattice(s, t)) out.push_back({s, t});
  return out;
}

double west_sup(const WestBoundaryData& d) {
  double m = 0;
  for (const auto& [k, v] : d) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TiltedField::TiltedField(const TiltedRect& r) : rect(r), values(std::size_t(r.s.size()) * r.t.size(), 0.0) {}

double TiltedField::sup() const { return sup_on(rect); }

double TiltedField::sup_on(const TiltedRect& sub) const {
  double m = 0;
  for (int s = std::max(sub.s.lo, rect.s.lo); s <= std::min(sub.s.hi, rect.s.hi); ++s)
    for (int t = std::max(sub.t.lo, rect.t.lo); t <= std::min(sub.t.hi, rect.t.hi); ++t)
      if (on_lattice(s, t)) m = std::max(m, std::abs(at(s, t)));
  return m;
}

WestBoundaryData random_west_data(const TiltedRect& r, std::uint64_t seed, std::uint64_t replica, bool zero_first_two) {
  require_dims(r);
  Stream rng(seed, 0x77657374ULL, replica);
  WestBoundaryData d;
  for (int s = r.s.lo; s <= r.s.hi; ++s)
    for (int t = r.t.lo; t <= r.t.hi; ++t)
      if (on_lattice(s, t) && is_west(r, s, t)) d[{s, t}] = (zero_first_two && t <= r.t.lo + 1) ? 0.0 : rng.uniform(-1, 1);
  double m = west_sup(d);
  if (m > 0)
    for (auto& [k, v] : d) v /= m;
  return d;
}

TiltedField tilted_potential(const TiltedRect& r, const PotentialField& f) {
  TiltedField V(r);
  for (int s = r.s.lo; s <= r.s.hi; ++s)
    for (int t = r.t.lo; t <= r.t.hi; ++t)
      if (on_lattice(s, t)) {
        Site p = from_tilted(s, t);
        if (!f.box.contains(p)) throw std::invalid_argument("tilted_potential: field does not cover the rectangle");
        V.at(s, t) = f.at(p);
      }
  return V;
}

TiltedField sample_tilted_potential(const EnsembleSpec& spec, const TiltedRect& r, const FrozenAssignment& frozen,
                                    std::uint64_t seed, std::uint64_t replica) {
  TiltedField V(r);
  for (int s = r.s.lo; s <= r.s.hi; ++s)
    for (int t = r.t.lo; t <= r.t.hi; ++t)
      if (on_lattice(s, t)) {
        Site p = from_tilted(s, t);
        auto it = frozen.values.find(p);
        V.at(s, t) = it != frozen.values.end() ? it->second
                                               : spec.at(p).inverse_cdf(site_uniform(seed, p.x, p.y, replica));
      }
  return V;
}

TiltedField extend_in_order(const TiltedRect& r, const WestBoundaryData& data, double E, const TiltedField& V,
                            const std::vector<std::pair<int, int>>& order) {
  require_dims(r);
  require_potential(r, V);
  TiltedField psi(r);
  std::vector<char> done(psi.values.size(), 0);
  std::size_t west = 0;
  for (const auto& [k, v] : data) {
    auto [s, t] = k;
    if (!r.contains_st(s, t) || !is_west(r, s, t)) throw std::invalid_argument("extend: data outside the west boundary");
    psi.at(s, t) = v;
    done[psi.slot(s, t)] = 1;
    ++west;
  }
  auto targets = sweep_order(r);
  if (west + targets.size() != std::size_t(r.site_count()))
    throw std::invalid_argument("extend: data does not cover the west boundary");
  if (order.size() != targets.size()) throw std::invalid_argument("extend: order is not a permutation of the targets");
  for (auto [s, t] : order) {
    if (!r.contains_st(s, t) || is_west(r, s, t) || done[psi.slot(s, t)])
      throw std::invalid_argument("extend: order is not a permutation of the targets");
    for (auto [ds, dt] : {std::pair{-1, -1}, {-2, -2}, {0, -2}, {-2, 0}})
      if (!done[psi.slot(s + ds, t + dt)]) throw std::invalid_argument("extend: order violates the dependency order");
    const double c = 4.0 + V.at(s - 1, t - 1) - E;
    psi.at(s, t) = c * psi.at(s - 1, t - 1) - psi.at(s - 2, t - 2) - psi.at(s, t - 2) - psi.at(s - 2, t);
    done[psi.slot(s, t)] = 1;
  }
  return psi;
}

TiltedField extend_from_west(const TiltedRect& r, const WestBoundaryData& data, double E, const TiltedField& V) {
  require_dims(r);
  return extend_in_order(r, data, E, V, sweep_order(r));
}

double eigen_residual(const TiltedField& psi, const TiltedField& V, double E) {
  const TiltedRect& r = psi.rect;
  double worst = 0;
  for (int s = r.s.lo + 1; s < r.s.hi; ++s)
    for (int t = r.t.lo + 1; t < r.t.hi; ++t) {
      if (!on_lattice(s, t)) continue;
      // standard neighbours x+-1, y+-1
      double lhs = (4.0 + V.at(s, t) - E) * psi.at(s, t);
      double nb = psi.at(s + 1, t + 1) + psi.at(s - 1, t - 1) + psi.at(s + 1, t - 1) + psi.at(s - 1, t + 1);
      double scale = std::abs(lhs) + std::abs(psi.at(s + 1, t + 1)) + std::abs(psi.at(s - 1, t - 1)) +
                     std::abs(psi.at(s + 1, t - 1)) + std::abs(psi.at(s - 1, t + 1));
      worst = std::max(worst, std::abs(lhs - nb) / std::max(1.0, scale));
    }
  return worst;
}

std::vector<GrowthSample> growth_samples(const EnsembleSpec& spec, int a, int b, int n, std::uint64_t seed) {
  TiltedRect r = tilted_rect(1, a, 1, b);
  std::vector<GrowthSample> out;
  const double Emax = 8 + spec.M();
  std::uint64_t key = key_combine(key_combine(seed, std::uint64_t(a)), std::uint64_t(b));
  for (int i = 0; i < n; ++i) {
    TiltedField V = sample_tilted_potential(spec, r, {}, key, std::uint64_t(i));
    WestBoundaryData d = random_west_data(r, key, std::uint64_t(i), false);
    double E = Stream(key, 0x456eULL, std::uint64_t(i)).uniform(0, Emax);
    TiltedField psi = extend_from_west(r, d, E, V);
    out.push_back({a, b, std::log(psi.sup() / west_sup(d))});
  }
  return out;
}

GrowthFit fit_growth_constant(const std::vector<GrowthSample>& samples) {
  std::map<std::pair<int, int>, std::vector<double>> cells;
  for (const auto& g : samples) cells[{g.a, g.b}].push_back(g.log_ratio);
  if (cells.empty()) throw std::invalid_argument("fit_growth_constant: no samples");
  GrowthFit fit;
  std::vector<double> xs, ys;
  double max_log = -INFINITY;
  for (const auto& [ab, v] : cells) {
    if (v.size() < 20) throw std::invalid_argument("fit_growth_constant: fewer than 20 samples in a cell");
    GrowthCell c;
    c.a = ab.first;
    c.b = ab.second;
    c.n = int(v.size());
    double sum = 0;
    c.max_log_ratio = -INFINITY;
    for (double y : v) {
      sum += y;
      c.max_log_ratio = std::max(c.max_log_ratio, y);
      xs.push_back(c.b * std::log(double(c.a)));
      ys.push_back(y);
    }
    c.mean_log_ratio = sum / double(v.size());
    c.C1 = c.max_log_ratio / (c.b * std::log(double(c.a)));
    max_log = std::max(max_log, c.max_log_ratio);
    fit.cells.push_back(c);
  }
  if (cells.size() >= 2) {
    LineFit lf = least_squares(xs, ys);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
  } else {
    fit.slope = fit.cells[0].mean_log_ratio / xs[0];
  }
  fit.max_ratio = std::exp(max_log);
  return fit;
}

double energy_variation_gap(const TiltedRect& r, const TiltedField& V, const WestBoundaryData& data, double E0, double E1) {
  if (E0 == E1) return 0.0;
  double m = west_sup(data);
  if (m == 0) return 0.0;
  TiltedField p0 = extend_from_west(r, data, E0, V), p1 = extend_from_west(r, data, E1, V);
  double d = 0;
  for (std::size_t i = 0; i < p0.values.size(); ++i) d = std::max(d, std::abs(p0.values[i] - p1.values[i]));
  return d / (std::abs(E1 - E0) * m);
}

double zero_column_formula(const TiltedField& psi, const TiltedField& V, double Ebar, int s, int t) {
  const TiltedRect& r = psi.rect;
  if (!r.contains_st(s, t) || is_west(r, s, t)) throw std::invalid_argument("zero_column_formula: target not swept");
  double v = -psi.at(s - 2, t);
  // terms below the rectangle carry psi = 0
  for (int k = 0; t - 1 - 2 * k >= r.t.lo; ++k) {
    int tt = t - 1 - 2 * k;
    double term = (4.0 - Ebar + V.at(s - 1, tt)) * psi.at(s - 1, tt);
    v += (k % 2 == 0) ? term : -term;
  }
  return v;
}

double zero_column_formula_check(const TiltedRect& r, const TiltedField& V, const WestBoundaryData& data, double Ebar,
                                 std::pair<int, int> target) {
  for (const auto& [k, v] : data)
    if (k.second <= r.t.lo + 1 && v != 0)
      throw std::invalid_argument("zero_column_formula_check: data must vanish on the first two rows");
  TiltedField psi = extend_from_west(r, data, Ebar, V);
  double f = zero_column_formula(psi, V, Ebar, target.first, target.second);
  double e = psi.at(target.first, target.second);
  return std::abs(f - e) / std::max(1.0, std::abs(e));
}

BestRow best_row_search(const TiltedField& psi) {
  const TiltedRect& r = psi.rect;
  if (r.s.size() < 2 || r.t.size() < 3) throw std::invalid_argument("best_row_search: degenerate rectangle");
  const double sup0 = psi.sup_on(TiltedRect{{r.s.lo, r.s.lo + 1}, {r.t.lo + 2, r.t.hi}});
  if (sup0 == 0) throw std::invalid_argument("best_row_search: zero field");
  BestRow best;
  bool found = false;
  for (int t0 = r.t.lo + 2; t0 <= r.t.hi; ++t0) {
    int s0 = on_lattice(r.s.lo, t0) ? r.s.lo : r.s.lo + 1;
    double m = INFINITY;
    for (int s = r.s.lo; s <= r.s.hi; ++s)
      if (on_lattice(s, t0)) m = std::min(m, std::abs(psi.at(s, t0)));
    if (!found || m > best.min_abs) {
      found = true;
      best.s0 = s0;
      best.t0 = t0;
      best.min_abs = m;
    }
  }
  const double blog = double(r.t.size()) * std::log(double(r.s.size()));
  best.implied_C2 = best.min_abs > 0 ? -std::log(best.min_abs / sup0) / blog : INFINITY;
  return best;
}

EventEstimate ni_event_mc(const EnsembleSpec& spec, const TiltedRect& r, const NiParams& p, const FrozenAssignment& frozen,
                          std::uint64_t seed) {
  require_dims(r);
  const int a = r.s.size(), b = r.t.size();
  const double loga = std::log(double(a));
  if (!p.relaxed && !(a >= p.alpha * b * b * loga))
    throw std::invalid_argument("ni_event_mc: rectangle too short for alpha (a < alpha b^2 log a)");
  if (p.trials < 1 || p.boundary_samples < 1) throw std::invalid_argument("ni_event_mc: need positive trial counts");
  std::vector<std::pair<int, int>> last;
  for (int t = r.t.hi - 1; t <= r.t.hi; ++t)
    for (int s = r.s.lo; s <= r.s.hi; ++s)
      if (on_lattice(s, t) && !frozen.contains(from_tilted(s, t))) last.push_back({s, t});
  if (last.empty()) throw std::invalid_argument("ni_event_mc: last two diagonals are entirely frozen");
  const double thr = std::exp(-p.threshold_exponent * p.alpha * b * loga);

  EventEstimate est;
  est.trials = p.trials;
  for (long i = 0; i < p.trials; ++i) {
    TiltedField V = sample_tilted_potential(spec, r, frozen, seed, std::uint64_t(i));
    double worst = INFINITY;
    for (int j = 0; j < p.boundary_samples; ++j) {
      auto d = random_west_data(r, seed, std::uint64_t(i) * std::uint64_t(p.boundary_samples) + std::uint64_t(j), true);
      TiltedField psi = extend_from_west(r, d, p.Ebar, V);
      long big = 0;
      for (auto [s, t] : last) big += std::abs(psi.at(s, t)) >= thr;
      worst = std::min(worst, double(big) / double(last.size()));
    }
    if (worst >= 2 * p.eps) ++est.hits;
  }
  est.frequency = double(est.hits) / double(est.trials);
  est.ci = wilson(est.hits, est.trials);
  return est;
}

UcEstimate uc_event_mc(const EnsembleSpec& spec, const Square& box, const UcParams& p, const FrozenAssignment& frozen,
                       std::uint64_t seed) {
  if (box.side > 64) throw std::invalid_argument("uc_event_mc: box side above 64");
  if (box.side < 2 || p.trials < 1) throw std::invalid_argument("uc_event_mc: need side >= 2 and positive trials");
  const double L = box.side, LlogL = L * std::log(L);
  const double w = std::exp(-p.alpha * std::sqrt(LlogL));
  const double q = 1.0 - p.eps / std::sqrt(LlogL);
  const double bound_log = p.alpha * LlogL;
  const Square half = scale_square(box, 0.25);
  std::vector<int> free_idx, half_idx;
  for (int i = 0; i < int(box.area()); ++i) {
    if (!frozen.contains(box.site(i))) free_idx.push_back(i);
    if (half.contains(box.site(i))) half_idx.push_back(i);
  }
  if (free_idx.empty()) throw std::invalid_argument("uc_event_mc: box entirely frozen");
  // at least ceil(q n) free sites must satisfy |psi| <= 1
  const std::size_t kq = std::size_t(std::max(1.0, std::ceil(q * double(free_idx.size()) - 1e-12))) - 1;

  UcEstimate est;
  est.trials = p.trials;
  for (long i = 0; i < p.trials; ++i) {
    Hamiltonian h = assemble(box, sample_potential(spec, box, frozen, seed, std::uint64_t(i)));
    if (count_in_open_window(h, std::nextafter(p.Ebar - w, -INFINITY), std::nextafter(p.Ebar + w, INFINITY)) == 0) {
      ++est.hits;
      ++est.vacuous;
      continue;
    }
    SpectralData sd = eigensolve(h);
    bool ok = true;
    for (int e = 0; e < h.n(); ++e) {
      if (std::abs(sd.values(e) - p.Ebar) > w) continue;
      auto v = sd.vectors.col(e);
      std::vector<double> a;
      a.reserve(free_idx.size());
      for (int k : free_idx) a.push_back(std::abs(v(k)));
      std::nth_element(a.begin(), a.begin() + std::ptrdiff_t(kq), a.end());
      double qv = a[kq], hm = 0;
      for (int k : half_idx) hm = std::max(hm, std::abs(v(k)));
      double lr = (qv > 0 ? std::log(hm / qv) : (hm > 0 ? INFINITY : -INFINITY)) - bound_log;
      est.worst_log_ratio = std::max(est.worst_log_ratio, lr);
      if (lr > 0) ok = false;
    }
    if (ok) ++est.hits;
  }
  est.frequency = double(est.hits) / double(est.trials);
  est.ci = wilson(est.hits, est.trials);
  return est;
}

std::string tilted_csv(const TiltedField& f, const std::string& manifest_line) {
  std::string out = "# " + manifest_line + "\ns,t,value\n";
  char buf[96];
  for (int s = f.rect.s.lo; s <= f.rect.s.hi; ++s)
    for (int t = f.rect.t.lo; t <= f.rect.t.hi; ++t)
      if (on_lattice(s, t)) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", s, t, f.at(s, t));
        out += buf;
      }
  return out;
}

}  // namespace rso
