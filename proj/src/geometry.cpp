#include "rso/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rso {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int mod(int a, int m) { return ((a % m) + m) % m; }

// number of integers in [lo,hi] congruent to par mod 2
int count_parity(int lo, int hi, int par) {
  if (hi < lo) return 0;
  int first = (mod(lo, 2) == par) ? lo : lo + 1;
  if (first > hi) return 0;
  return (hi - first) / 2 + 1;
}

int scaled_side(int side, double f) {
  static const double allowed[] = {1.0 / 64, 0.25, 0.5, 1.0, 2.0, 4.0};
  bool ok = false;
  for (double a : allowed) ok = ok || std::abs(a - f) < 1e-12;
  if (!ok) throw std::invalid_argument("scale_square: factor must be one of 1/64,1/4,1/2,1,2,4");
  if (std::abs(f - 1.0) < 1e-12) return side;
  int n = int(std::ceil(side * std::sqrt(f) - 1e-9));
  return std::max(1, n);
}

// 2D Fenwick tree for occupancy sums
struct Fenwick2 {
  int n;
  std::vector<int> t;
  explicit Fenwick2(int n_) : n(n_), t(std::size_t(n_ + 1) * (n_ + 1), 0) {}
  void add(int i, int j, int v) {
    for (int a = i + 1; a <= n; a += a & -a)
      for (int b = j + 1; b <= n; b += b & -b) t[std::size_t(a) * (n + 1) + b] += v;
  }
  int prefix(int i, int j) const {  // sum over [0,i) x [0,j)
    int s = 0;
    for (int a = i; a > 0; a -= a & -a)
      for (int b = j; b > 0; b -= b & -b) s += t[std::size_t(a) * (n + 1) + b];
    return s;
  }
  int rect(int i0, int j0, int i1, int j1) const {  // inclusive
    return prefix(i1 + 1, j1 + 1) - prefix(i0, j1 + 1) - prefix(i1 + 1, j0) + prefix(i0, j0);
  }
};

}  // namespace

Square aligned_square(Site corner, int log2side) {
  if (log2side < 0 || log2side > 30) throw std::invalid_argument("aligned_square: bad exponent");
  Square q{corner, 1 << log2side, true};
  if (!is_aligned(q)) throw std::invalid_argument("aligned_square: corner off the half grid");
  return q;
}

bool is_aligned(const Square& q) {
  if (q.side < 1 || (q.side & (q.side - 1)) != 0) return false;
  if (q.side == 1) return true;
  int h = q.side / 2;
  return mod(q.corner.x, h) == 0 && mod(q.corner.y, h) == 0;
}

long TiltedRect::site_count() const {
  long es = count_parity(s.lo, s.hi, 0), os = count_parity(s.lo, s.hi, 1);
  long et = count_parity(t.lo, t.hi, 0), ot = count_parity(t.lo, t.hi, 1);
  return es * et + os * ot;
}

std::vector<Site> TiltedRect::sites() const {
  std::vector<Site> out;
  out.reserve(std::size_t(site_count()));
  for (int ss = s.lo; ss <= s.hi; ++ss)
    for (int tt = t.lo + mod(ss + t.lo, 2); tt <= t.hi; tt += 2) out.push_back(from_tilted(ss, tt));
  return out;
}

TiltedRect tilted_rect(int s1, int s2, int t1, int t2) {
  if (s2 < s1 || t2 < t1) throw std::invalid_argument("tilted_rect: empty range");
  return TiltedRect{{s1, s2}, {t1, t2}};
}

std::pair<int, int> to_tilted(Site p) { return {p.x + p.y, p.x - p.y}; }

Site from_tilted(int s, int t) {
  if (mod(s + t, 2) != 0) throw std::invalid_argument("from_tilted: s+t must be even");
  return {(s + t) / 2, (s - t) / 2};
}

Square scale_square(const Square& q, double f) {
  int n = scaled_side(q.side, f);
  Square r = q;
  r.side = n;
  r.aligned = false;
  int off = floor_div(q.side - n, 2);
  r.corner = {q.corner.x + off, q.corner.y + off};
  return r;
}

TiltedRect scale_square(const TiltedRect& q, double f) {
  auto scale = [&](IntRange r) {
    int len = r.size(), n = scaled_side(len, f);
    int lo = r.lo + floor_div(len - n, 2);
    return IntRange{lo, lo + n - 1};
  };
  TiltedRect out{scale(q.s), scale(q.t)};
  if (out.site_count() == 0) throw std::invalid_argument("scale_square: empty result");
  return out;
}

SiteSet west_boundary(const TiltedRect& r) {
  if (r.s.size() < 2 || r.t.size() < 2) throw std::invalid_argument("west_boundary: degenerate rectangle");
  SiteSet out;
  for (int ss = r.s.lo; ss <= r.s.hi; ++ss)
    for (int tt = r.t.lo; tt <= r.t.hi; ++tt)
      if (mod(ss + tt, 2) == 0 && (ss <= r.s.lo + 1 || tt <= r.t.lo + 1)) out.insert(from_tilted(ss, tt));
  return out;
}

TiltedRect interior(const TiltedRect& r) {
  if (r.s.size() < 3 || r.t.size() < 3) throw std::invalid_argument("interior: degenerate rectangle");
  return TiltedRect{{r.s.lo + 1, r.s.hi - 1}, {r.t.lo + 1, r.t.hi - 1}};
}

std::vector<std::pair<Site, Site>> box_boundary(const Square& inner, const Square& outer) {
  if (!outer.contains(inner)) throw std::invalid_argument("box_boundary: inner not inside outer");
  static const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  std::vector<std::pair<Site, Site>> out;
  for (int y = inner.y0(); y <= inner.y1(); ++y)
    for (int x = inner.x0(); x <= inner.x1(); ++x)
      for (int d = 0; d < 4; ++d) {
        Site v{x + dx[d], y + dy[d]};
        if (outer.contains(v) && !inner.contains(v)) out.push_back({{x, y}, v});
      }
  return out;
}

bool is_sparse(const SiteSet& f, const TiltedRect& r, double eps) {
  if (eps < 0 || eps > 1) throw std::invalid_argument("is_sparse: eps outside [0,1]");
  std::vector<int> cs(r.s.size(), 0), ct(r.t.size(), 0);
  for (const Site& p : f) {
    auto [ss, tt] = to_tilted(p);
    if (!r.contains_st(ss, tt)) continue;
    ++cs[ss - r.s.lo];
    ++ct[tt - r.t.lo];
  }
  for (int i = 0; i < r.s.size(); ++i) {
    int ss = r.s.lo + i;
    if (cs[i] > eps * count_parity(r.t.lo, r.t.hi, mod(ss, 2))) return false;
  }
  for (int j = 0; j < r.t.size(); ++j) {
    int tt = r.t.lo + j;
    if (ct[j] > eps * count_parity(r.s.lo, r.s.hi, mod(tt, 2))) return false;
  }
  return true;
}

const char* to_string(RegularityVerdict::Kind k) {
  switch (k) {
    case RegularityVerdict::CertifiedRegular: return "CertifiedRegular";
    case RegularityVerdict::CertifiedIrregular: return "CertifiedIrregular";
    default: return "Unknown";
  }
}

RegularityVerdict regularity_check(const SiteSet& f, const TiltedRect& q, double eps) {
  if (!q.is_square()) throw std::invalid_argument("regularity_check: q must be a tilted square");
  const int a = q.s.size();
  const int par0 = mod(q.s.lo + q.t.lo, 2);
  auto valid = [&](int i, int j) { return ((i + j + par0) & 1) == 0; };
  std::vector<char> cell(std::size_t(a) * a, 0);
  for (const Site& p : f) {
    auto [ss, tt] = to_tilted(p);
    if (q.contains_st(ss, tt)) cell[std::size_t(ss - q.s.lo) * a + (tt - q.t.lo)] = 1;
  }
  // PS[i][j]: F count on s-diagonal i over t-offsets [0,j); PT symmetric
  std::vector<int> PS(std::size_t(a) * (a + 1), 0), PT(std::size_t(a) * (a + 1), 0);
  std::vector<int> P2(std::size_t(a + 1) * (a + 1), 0);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) {
      int c = cell[std::size_t(i) * a + j];
      PS[std::size_t(i) * (a + 1) + j + 1] = PS[std::size_t(i) * (a + 1) + j] + c;
      PT[std::size_t(j) * (a + 1) + i + 1] = PT[std::size_t(j) * (a + 1) + i] + c;
      P2[std::size_t(i + 1) * (a + 1) + j + 1] = P2[std::size_t(i) * (a + 1) + j + 1] +
                                                 P2[std::size_t(i + 1) * (a + 1) + j] -
                                                 P2[std::size_t(i) * (a + 1) + j] + c;
    }
  auto fcount = [&](int i0, int j0, int r) {
    int i1 = i0 + r, j1 = j0 + r;
    return P2[std::size_t(i1) * (a + 1) + j1] - P2[std::size_t(i0) * (a + 1) + j1] -
           P2[std::size_t(i1) * (a + 1) + j0] + P2[std::size_t(i0) * (a + 1) + j0];
  };
  // valid cells on diagonal i within offsets [j0, j0+r)
  auto diag_len = [&](int i, int j0, int r) { return count_parity(j0, j0 + r - 1, mod(i + par0, 2)); };

  struct Cand {
    int i0, j0, r;
    long sites;
  };
  std::vector<Cand> cands;
  std::vector<int> diff(std::size_t(a + 1) * (a + 1), 0);
  for (int i0 = 0; i0 < a; ++i0)
    for (int j0 = 0; j0 < a; ++j0)
      for (int r = 1; i0 + r <= a && j0 + r <= a; ++r) {
        if (fcount(i0, j0, r) == 0) continue;
        bool bad = false;
        for (int i = i0; i < i0 + r && !bad; ++i) {
          int c = PS[std::size_t(i) * (a + 1) + j0 + r] - PS[std::size_t(i) * (a + 1) + j0];
          if (c > eps * diag_len(i, j0, r)) bad = true;
        }
        for (int j = j0; j < j0 + r && !bad; ++j) {
          int c = PT[std::size_t(j) * (a + 1) + i0 + r] - PT[std::size_t(j) * (a + 1) + i0];
          if (c > eps * diag_len(j, i0, r)) bad = true;
        }
        if (!bad) continue;
        TiltedRect sub{{q.s.lo + i0, q.s.lo + i0 + r - 1}, {q.t.lo + j0, q.t.lo + j0 + r - 1}};
        cands.push_back({i0, j0, r, sub.site_count()});
        diff[std::size_t(i0) * (a + 1) + j0] += 1;
        diff[std::size_t(i0 + r) * (a + 1) + j0] -= 1;
        diff[std::size_t(i0) * (a + 1) + j0 + r] -= 1;
        diff[std::size_t(i0 + r) * (a + 1) + j0 + r] += 1;
      }

  RegularityVerdict v;
  v.q_sites = q.site_count();
  v.nonsparse_count = long(cands.size());
  // union of all non-sparse subsquares
  for (int i = 0; i <= a; ++i)
    for (int j = 0; j <= a; ++j) {
      int& d = diff[std::size_t(i) * (a + 1) + j];
      if (i > 0) d += diff[std::size_t(i - 1) * (a + 1) + j];
      if (j > 0) d += diff[std::size_t(i) * (a + 1) + j - 1];
      if (i > 0 && j > 0) d -= diff[std::size_t(i - 1) * (a + 1) + j - 1];
    }
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j)
      if (valid(i, j) && diff[std::size_t(i) * (a + 1) + j] > 0) ++v.union_sites;

  // greedy packings, largest-first and smallest-first; keep the bigger
  auto pack = [&](bool largest_first, std::vector<TiltedRect>& out) {
    std::vector<Cand> order = cands;
    std::stable_sort(order.begin(), order.end(), [&](const Cand& x, const Cand& y) {
      return largest_first ? x.sites > y.sites : x.sites < y.sites;
    });
    Fenwick2 occ(a);
    long total = 0;
    for (const Cand& c : order) {
      if (c.sites == 0) continue;
      if (occ.rect(c.i0, c.j0, c.i0 + c.r - 1, c.j0 + c.r - 1) > 0) continue;
      for (int i = c.i0; i < c.i0 + c.r; ++i)
        for (int j = c.j0; j < c.j0 + c.r; ++j)
          if (valid(i, j)) occ.add(i, j, 1);
      total += c.sites;
      out.push_back({{q.s.lo + c.i0, q.s.lo + c.i0 + c.r - 1}, {q.t.lo + c.j0, q.t.lo + c.j0 + c.r - 1}});
    }
    return total;
  };
  std::vector<TiltedRect> w1, w2;
  long t1 = pack(true, w1), t2 = pack(false, w2);
  if (t1 >= t2) {
    v.witness = std::move(w1);
    v.witness_sites = t1;
  } else {
    v.witness = std::move(w2);
    v.witness_sites = t2;
  }
  double budget = eps * double(v.q_sites);
  if (double(v.witness_sites) > budget) {
    v.kind = RegularityVerdict::CertifiedIrregular;
  } else if (double(v.union_sites) <= budget) {
    v.kind = RegularityVerdict::CertifiedRegular;
    v.witness.clear();
    v.witness_sites = 0;
  } else {
    v.kind = RegularityVerdict::Unknown;
  }
  if (v.kind != RegularityVerdict::CertifiedIrregular) {
    v.witness.clear();
    v.witness_sites = 0;
  }
  return v;
}

std::vector<TiltedRect> covering_tilted_squares(const Square& box) {
  const int L = box.side;
  if (L < 1024) throw std::invalid_argument("covering_tilted_squares: box too small (side < 1024)");
  Square half = scale_square(box, 0.5);
  const int b = 2 * (L / 96), a = 8 * b, pad = 7 * b / 2;
  int smin = half.x0() + half.y0(), smax = half.x1() + half.y1();
  int tmin = half.x0() - half.y1(), tmax = half.x1() - half.y0();
  auto tile_hits_half = [&](int S, int T) {
    for (int ss = S; ss < S + b; ++ss)
      for (int tt = T + mod(ss + T, 2); tt < T + b; tt += 2)
        if (half.contains(from_tilted(ss, tt))) return true;
    return false;
  };
  auto inside_box = [&](const TiltedRect& r) {
    // extremes of x=(s+t)/2 and y=(s-t)/2 over even-parity cells
    int sp_lo = r.s.lo + r.t.lo, sp_hi = r.s.hi + r.t.hi;
    int sm_lo = r.s.lo - r.t.hi, sm_hi = r.s.hi - r.t.lo;
    if (mod(sp_lo, 2)) ++sp_lo;
    if (mod(sp_hi, 2)) --sp_hi;
    if (mod(sm_lo, 2)) ++sm_lo;
    if (mod(sm_hi, 2)) --sm_hi;
    return sp_lo / 2 >= box.x0() && sp_hi / 2 <= box.x1() && floor_div(sm_lo, 2) >= box.y0() &&
           floor_div(sm_hi, 2) <= box.y1();
  };
  std::vector<TiltedRect> out;
  for (int S = smin; S <= smax; S += b)
    for (int T = tmin; T <= tmax; T += b) {
      if (!tile_hits_half(S, T)) continue;
      TiltedRect q{{S - pad, S + b - 1 + pad}, {T - pad, T + b - 1 + pad}};
      if (q.s.size() != a) throw std::logic_error("covering_tilted_squares: side mismatch");
      if (!inside_box(q)) throw std::invalid_argument("covering_tilted_squares: box too small to satisfy rounding");
      out.push_back(q);
    }
  return out;
}

CoveringReport verify_covering(const Square& box, const std::vector<TiltedRect>& qs) {
  CoveringReport rep;
  rep.count = qs.size();
  rep.count_ok = double(qs.size()) <= std::ldexp(1.0, 50);
  rep.min_side = std::numeric_limits<int>::max();
  for (const auto& q : qs) rep.min_side = std::min(rep.min_side, std::min(q.s.size(), q.t.size()));
  rep.min_side_ok = !qs.empty() && 256.0 * rep.min_side >= double(box.side);

  std::vector<char> mark(std::size_t(box.area()), 0);
  rep.inside_box = true;
  for (const auto& q : qs) {
    for (int ss = q.s.lo; ss <= q.s.hi && rep.inside_box; ++ss)
      for (int tt = q.t.lo + mod(ss + q.t.lo, 2); tt <= q.t.hi; tt += 2)
        if (!box.contains(from_tilted(ss, tt))) {
          rep.inside_box = false;
          break;
        }
    TiltedRect inner = scale_square(q, 1.0 / 64);
    for (int ss = inner.s.lo; ss <= inner.s.hi; ++ss)
      for (int tt = inner.t.lo + mod(ss + inner.t.lo, 2); tt <= inner.t.hi; tt += 2) {
        Site p = from_tilted(ss, tt);
        if (box.contains(p)) mark[std::size_t(box.index(p))] = 1;
      }
  }
  Square half = scale_square(box, 0.5);
  rep.half_covered = true;
  for (int y = half.y0(); y <= half.y1() && rep.half_covered; ++y)
    for (int x = half.x0(); x <= half.x1(); ++x)
      if (!mark[std::size_t(box.index({x, y}))]) {
        rep.half_covered = false;
        break;
      }
  return rep;
}

double dist_to_complement(const Square& box, const Square& cover, const Square& inner) {
  double d = std::numeric_limits<double>::infinity();
  Square c{{std::max(cover.x0(), box.x0()), std::max(cover.y0(), box.y0())}, 0};
  int cx1 = std::min(cover.x1(), box.x1()), cy1 = std::min(cover.y1(), box.y1());
  if (c.corner.x > box.x0()) d = std::min(d, double(inner.x0() - c.corner.x + 1));
  if (cx1 < box.x1()) d = std::min(d, double(cx1 - inner.x1() + 1));
  if (c.corner.y > box.y0()) d = std::min(d, double(inner.y0() - c.corner.y + 1));
  if (cy1 < box.y1()) d = std::min(d, double(cy1 - inner.y1() + 1));
  return d;
}

CoverResult cover_defects(const Square& box, const std::vector<Square>& bad, int L1, int alpha) {
  auto dyadic = [](long v) { return v >= 1 && (v & (v - 1)) == 0; };
  if (bad.empty()) return CoverResult{L1, {}, 1.0};
  const int L2 = bad.front().side;
  for (const auto& q : bad)
    if (q.side != L2 || !box.contains(q)) throw std::invalid_argument("cover_defects: bad squares must share a side and lie in the box");
  const long L0 = box.side;
  if (!dyadic(alpha) || !dyadic(L1) || !(L0 >= long(alpha) * L1 && L1 >= long(alpha) * L2))
    throw std::invalid_argument("cover_defects: scale hypotheses violated");
  const int gap = std::max(0, int(std::ceil(L1 / 8.0)) - 1);
  const int n = int(bad.size());

  for (long Lt = L1; Lt <= long(alpha) * L1 && Lt <= L0; Lt *= 2) {
    std::vector<int> cl(n);
    std::iota(cl.begin(), cl.end(), 0);
    bool feasible = true;
    std::vector<Square> cov(n);
    for (;;) {
      // cover per cluster root
      std::vector<int> roots;
      for (int i = 0; i < n; ++i)
        if (cl[i] == i) roots.push_back(i);
      for (int r : roots) {
        int x0 = std::numeric_limits<int>::max(), y0 = x0, x1 = std::numeric_limits<int>::min(), y1 = x1;
        for (int i = 0; i < n; ++i)
          if (cl[i] == r) {
            x0 = std::min(x0, bad[i].x0()), y0 = std::min(y0, bad[i].y0());
            x1 = std::max(x1, bad[i].x1()), y1 = std::max(y1, bad[i].y1());
          }
        int w = x1 - x0 + 1, h = y1 - y0 + 1;
        if (w + 2 * gap > Lt || h + 2 * gap > Lt) {
          feasible = false;
          break;
        }
        int cx = x0 - gap - int((Lt - (w + 2 * gap)) / 2);
        int cy = y0 - gap - int((Lt - (h + 2 * gap)) / 2);
        cx = std::clamp(cx, box.x0(), int(box.x1() - Lt + 1));
        cy = std::clamp(cy, box.y0(), int(box.y1() - Lt + 1));
        cov[r] = Square{{cx, cy}, int(Lt), false};
      }
      if (!feasible) break;
      bool merged = false;
      for (size_t u = 0; u < roots.size() && !merged; ++u)
        for (size_t v = u + 1; v < roots.size() && !merged; ++v)
          if (cov[roots[u]].intersects(cov[roots[v]])) {
            int ru = roots[u], rv = roots[v];
            for (int i = 0; i < n; ++i)
              if (cl[i] == rv) cl[i] = ru;
            merged = true;
          }
      if (!merged) break;
    }
    if (!feasible) continue;
    CoverResult res;
    res.L_tilde = int(Lt);
    res.alpha_used = double(Lt) / L1;
    for (int i = 0; i < n; ++i) res.covers.push_back(cov[cl[i]]);
    return res;
  }
  throw std::runtime_error("cover_defects: no cover with side <= alpha*L1");
}

double site_distance(Site a, Site b, Metric m) {
  double dx = a.x - b.x, dy = a.y - b.y;
  if (m == Metric::Linf) return std::max(std::abs(dx), std::abs(dy));
  return std::sqrt(dx * dx + dy * dy);
}

bool is_r_net(const SiteSet& x, const Square& box, double r, Metric m) {
  if (x.empty()) throw std::invalid_argument("is_r_net: empty set");
  std::vector<Site> pts(x.begin(), x.end());
  const double tol = 1e-12 * std::max(1.0, r);
  for (int yy = box.y0(); yy <= box.y1(); ++yy)
    for (int xx = box.x0(); xx <= box.x1(); ++xx) {
      Site p{xx, yy};
      bool hit = false;
      for (const Site& q : pts)
        if (site_distance(p, q, m) <= r + tol) {
          hit = true;
          break;
        }
      if (!hit) return false;
    }
  return true;
}

long linf(Site a, Site b) { return std::max(std::abs(long(a.x) - b.x), std::abs(long(a.y) - b.y)); }

namespace {

long linf_to_rect(Site p, const Square& r) {
  long dx = std::max({0L, long(r.x0()) - p.x, long(p.x) - r.x1()});
  long dy = std::max({0L, long(r.y0()) - p.y, long(p.y) - r.y1()});
  return std::max(dx, dy);
}

constexpr long kInf = std::numeric_limits<long>::max() / 4;

}  // namespace

DefectDistance::DefectDistance(DefectGraph g) : g_(std::move(g)) {
  const auto& box = g_.box;
  const auto& d = g_.defects;
  if (g_.shortcut_weight < 0) throw std::invalid_argument("defect graph: negative L3");
  for (size_t k = 0; k < d.size(); ++k) {
    if (!box.contains(d[k])) throw std::invalid_argument("defect graph: defect outside box");
    for (size_t j = 0; j < k; ++j)
      if (d[k].intersects(d[j])) throw std::invalid_argument("defect graph: defects overlap");
  }
  for (const auto& q : d) {
    int D = (q.side + 7) / 8;
    deep_.push_back(D);
    // a side facing the rest of the box needs a gap of D-1 sites
    Rect r;
    r.x0 = q.x0() + (q.x0() > box.x0() ? D - 1 : 0);
    r.x1 = q.x1() - (q.x1() < box.x1() ? D - 1 : 0);
    r.y0 = q.y0() + (q.y0() > box.y0() ? D - 1 : 0);
    r.y1 = q.y1() - (q.y1() < box.y1() ? D - 1 : 0);
    deep_rect_.push_back(r);
    ring_.emplace_back();
    for (int y = q.y0() - 1; y <= q.y1() + 1; ++y)
      for (int x = q.x0() - 1; x <= q.x1() + 1; ++x) {
        Site p{x, y};
        if (box.contains(p) && !q.contains(p)) ring_.back().push_back(p);
      }
  }
  const size_t K = d.size();
  ring_to_deep_.assign(K, std::vector<long>(K, kInf));
  for (size_t j = 0; j < K; ++j)
    for (size_t k = 0; k < K; ++k) {
      long best = kInf;
      for (const Site& p : ring_[j]) best = std::min(best, dist_deep(k, p));
      ring_to_deep_[j][k] = best;
    }
  // negative cycles through shortcuts: Floyd-Warshall on D(ring_j, deep_k) - L3
  std::vector<std::vector<long>> W(K, std::vector<long>(K, kInf));
  for (size_t j = 0; j < K; ++j)
    for (size_t k = 0; k < K; ++k)
      if (ring_to_deep_[j][k] < kInf && !ring_[k].empty()) W[j][k] = ring_to_deep_[j][k] - g_.shortcut_weight;
  for (size_t m = 0; m < K; ++m)
    for (size_t i = 0; i < K; ++i)
      for (size_t j = 0; j < K; ++j)
        if (W[i][m] < kInf && W[m][j] < kInf) W[i][j] = std::min(W[i][j], W[i][m] + W[m][j]);
  for (size_t i = 0; i < K; ++i)
    if (W[i][i] < 0) throw std::invalid_argument("defect graph: negative-cycle precondition violated");
}

long DefectDistance::dist_deep(std::size_t k, Site p) const {
  const Rect& r = deep_rect_[k];
  if (r.empty()) return kInf;
  long dx = std::max({0L, long(r.x0) - p.x, long(p.x) - r.x1});
  long dy = std::max({0L, long(r.y0) - p.y, long(p.y) - r.y1});
  return std::max(dx, dy);
}

bool DefectDistance::is_deep(std::size_t k, Site p) const { return dist_deep(k, p) == 0; }

bool DefectDistance::is_outer(std::size_t k, Site p) const {
  const Square& q = g_.defects[k];
  return g_.box.contains(p) && !q.contains(p) && linf_to_rect(p, q) == 1;
}

long DefectDistance::operator()(Site x, Site y) const {
  if (!g_.box.contains(x) || !g_.box.contains(y)) throw std::invalid_argument("defect graph: site outside box");
  const size_t K = g_.defects.size();
  const long L3 = g_.shortcut_weight;
  // h[k]: best cost from x to the outer ring of defect k, ending with its shortcut
  std::vector<long> h(K, kInf);
  for (size_t k = 0; k < K; ++k) {
    long dd = dist_deep(k, x);
    if (dd < kInf && !ring_[k].empty()) h[k] = dd - L3;
  }
  for (size_t round = 0; round < K; ++round) {
    bool changed = false;
    for (size_t k = 0; k < K; ++k) {
      if (ring_[k].empty()) continue;
      for (size_t j = 0; j < K; ++j) {
        if (h[j] >= kInf || ring_to_deep_[j][k] >= kInf) continue;
        long c = h[j] + ring_to_deep_[j][k] - L3;
        if (c < h[k]) h[k] = c, changed = true;
      }
    }
    if (!changed) break;
  }
  long best = linf(x, y);
  for (size_t k = 0; k < K; ++k) {
    if (h[k] >= kInf) continue;
    long tail = kInf;
    for (const Site& p : ring_[k]) tail = std::min(tail, linf(p, y));
    best = std::min(best, h[k] + tail);
  }
  return best;
}

long DefectDistance::lower_bound(Site x, Site y) const {
  long saving = 0;
  for (size_t k = 0; k < g_.defects.size(); ++k) {
    const Rect& r = deep_rect_[k];
    if (r.empty() || ring_[k].empty()) continue;
    long far = 0;
    for (const Site& p : ring_[k])
      for (Site c : {Site{r.x0, r.y0}, Site{r.x0, r.y1}, Site{r.x1, r.y0}, Site{r.x1, r.y1}})
        far = std::max(far, linf(p, c));
    saving += far + g_.shortcut_weight;
  }
  return linf(x, y) - saving;
}

long defect_graph_distance(const DefectGraph& g, Site x, Site y) { return DefectDistance(g)(x, y); }

nlohmann::json to_json(const Square& q) {
  return {{"kind", "square"}, {"corner", {q.corner.x, q.corner.y}}, {"side", q.side}, {"aligned", q.aligned}};
}

nlohmann::json to_json(const TiltedRect& r) {
  nlohmann::json j = {{"kind", "tilted"}, {"s_range", {r.s.lo, r.s.hi}}, {"t_range", {r.t.lo, r.t.hi}}};
  if (r.is_square()) j["side"] = r.s.size();
  return j;
}

nlohmann::json to_json(const SiteSet& s) {
  nlohmann::json j = nlohmann::json::array();
  for (const Site& p : s) j.push_back({p.x, p.y});
  return j;
}

Square square_from_json(const nlohmann::json& j) {
  Square q;
  q.corner = {j.at("corner").at(0).get<int>(), j.at("corner").at(1).get<int>()};
  q.side = j.at("side").get<int>();
  q.aligned = j.value("aligned", false);
  if (q.side < 1) throw std::invalid_argument("square: side must be positive");
  return q;
}

}  // namespace rso
