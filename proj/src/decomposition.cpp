#include "rso/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rso {

double PiecewiseLinear::operator()(double t) const {
  for (const auto& s : seg)
    if (t > s.t0 && t <= s.t1) {
      // left-continuous at knots
      if (t == s.t1) return s.v1;
      return s.v0 + (s.v1 - s.v0) * (t - s.t0) / (s.t1 - s.t0);
    }
  throw std::invalid_argument("piecewise function: t outside (0,1)");
}

double PiecewiseLinear::inf() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : seg) m = std::min({m, s.v0, s.v1});
  return m;
}

double PiecewiseLinear::sup() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : seg) m = std::max({m, s.v0, s.v1});
  return m;
}

namespace {

double measure_below(const Segment& s, double u, bool strict) {
  double len = s.t1 - s.t0;
  if (s.v0 == s.v1) return (strict ? s.v0 < u : s.v0 <= u) ? len : 0.0;
  double r = (u - s.v0) / (s.v1 - s.v0);
  if (s.v1 < s.v0) r = 1.0 - r;
  return len * std::clamp(r, 0.0, 1.0);
}

// limit values of f on the subinterval (a,b) of one of its segments
Segment restrict_to(const PiecewiseLinear& f, double a, double b) {
  for (const auto& s : f.seg)
    if (a >= s.t0 && b <= s.t1) {
      auto lerp = [&](double t) { return s.v0 + (s.v1 - s.v0) * (t - s.t0) / (s.t1 - s.t0); };
      return {a, b, a == s.t0 ? s.v0 : lerp(a), b == s.t1 ? s.v1 : lerp(b)};
    }
  throw std::logic_error("piecewise function: knot set mismatch");
}

PiecewiseLinear combine(const PiecewiseLinear& a, const PiecewiseLinear& b, double sign) {
  std::vector<double> knots;
  for (const auto& s : a.seg) knots.push_back(s.t0), knots.push_back(s.t1);
  for (const auto& s : b.seg) knots.push_back(s.t0), knots.push_back(s.t1);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  PiecewiseLinear out;
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    Segment sa = restrict_to(a, knots[i], knots[i + 1]), sb = restrict_to(b, knots[i], knots[i + 1]);
    out.seg.push_back({knots[i], knots[i + 1], sa.v0 + sign * sb.v0, sa.v1 + sign * sb.v1});
  }
  return out;
}

}  // namespace

double PiecewiseLinear::pushforward_cdf(double u) const {
  double m = 0;
  for (const auto& s : seg) m += measure_below(s, u, false);
  return std::min(m, 1.0);
}

double PiecewiseLinear::pushforward_cdf_left(double u) const {
  double m = 0;
  for (const auto& s : seg) m += measure_below(s, u, true);
  return std::min(m, 1.0);
}

PiecewiseLinear add(const PiecewiseLinear& a, const PiecewiseLinear& b) { return combine(a, b, 1.0); }
PiecewiseLinear sub(const PiecewiseLinear& a, const PiecewiseLinear& b) { return combine(a, b, -1.0); }

PiecewiseLinear quantile_function(const SiteDistribution& d) {
  const auto& bp = d.breakpoints();
  PiecewiseLinear g;
  double prevF = 0;
  for (size_t i = 0; i < bp.size(); ++i) {
    double Fl = d.cdf_left(bp[i]), F = d.cdf(bp[i]);
    if (i > 0 && Fl > prevF) g.seg.push_back({prevF, Fl, bp[i - 1], bp[i]});
    if (F > Fl) g.seg.push_back({Fl, F, bp[i], bp[i]});
    prevF = F;
  }
  // pin the ends to exactly 0 and 1 against rounding in the masses
  g.seg.front().t0 = 0.0;
  g.seg.back().t1 = 1.0;
  return g;
}

PiecewiseLinear compose_affine(const PiecewiseLinear& g, double lo, double hi) {
  PiecewiseLinear out;
  const double w = hi - lo;
  for (const auto& s : g.seg) {
    double a = std::max(s.t0, lo), b = std::min(s.t1, hi);
    // slivers left by rounding in lo, hi carry no mass
    if (!(b - a > 1e-12 * w)) continue;
    Segment r = restrict_to(g, a, b);
    out.seg.push_back({(a - lo) / w, (b - lo) / w, r.v0, r.v1});
  }
  for (std::size_t i = 1; i < out.seg.size(); ++i) out.seg[i].t0 = out.seg[i - 1].t1;
  out.seg.front().t0 = 0.0;
  out.seg.back().t1 = 1.0;
  return out;
}

UniformWindow uniform_parameter_bounds(double gamma, double rho, double M) {
  if (!(M > 0) || !(gamma > 0) || !(rho > 0 && rho < 1))
    throw std::invalid_argument("uniform_parameter_bounds: need gamma > 0, 0 < rho < 1, M > 0");
  UniformWindow w;
  w.gamma_eff = std::min(gamma, M / 4);
  w.p_minus = std::min(rho / 2, w.gamma_eff / (2 * M));
  w.p_plus = 1 - w.p_minus;
  w.K = 8 * int(std::ceil(std::max(2 / rho, 2 * M / w.gamma_eff) - 1e-9)) + 1;
  w.iota = w.gamma_eff / (4.0 * w.K);
  return w;
}

BernoulliDecomposition decompose(const SiteDistribution& d, double gamma, double rho) {
  const double M = d.M();
  BernoulliDecomposition dec;
  dec.window = uniform_parameter_bounds(gamma, rho, M);
  const double g = dec.window.gamma_eff;
  const int K = dec.window.K;
  if (anti_concentration(d, g) < rho - 1e-12)
    throw std::invalid_argument("decompose: anti-concentration precondition fails");

  // smallest maximizer of the closed window mass of half-width g/4
  const double w = g / 4;
  std::vector<double> cand = {0.0, M};
  for (double b : d.breakpoints()) cand.push_back(b), cand.push_back(b - w), cand.push_back(b + w);
  std::sort(cand.begin(), cand.end());
  double best = -1, x = 0;
  for (double t : cand) {
    if (t < 0 || t > M) continue;
    double m = d.mass_closed(t - w, t + w);
    if (m > best + 1e-15) best = m, x = t;
  }
  if (best < g / (2 * M) - 1e-12) throw std::logic_error("decompose: no window of mass gamma/2M");
  dec.x = x;

  const double thr = 0.5 * std::min(rho / 2, g / (2 * M));
  const double delta = g / (4.0 * K);
  dec.mirrored = (1.0 - d.cdf(x + g / 2)) < rho / 2;
  // in mirrored coordinates X' = M - X the same construction runs above M - x
  auto mass = [&](double a, double b) { return dec.mirrored ? d.mass_closed(M - b, M - a) : d.mass_closed(a, b); };
  const double x0 = dec.mirrored ? M - x : x;
  int k = -1;
  for (int j = 0; j + 1 < K; ++j) {
    double a0 = x0 + g / 4 + j * delta;
    if (mass(a0, a0 + delta) <= thr && mass(a0 + delta, a0 + 2 * delta) <= thr) {
      k = j;
      break;
    }
  }
  if (k < 0) throw std::logic_error("decompose: no adjacent low-mass pair");
  dec.k = k;
  double c = x0 + g / 4 + (k + 1) * delta;
  if (dec.mirrored) {
    c = M - c;
    dec.p = 1.0 - d.cdf_left(c);  // 1 - p' with p' = P[X' > M - c]
  } else {
    dec.p = 1.0 - d.cdf(c);
  }
  dec.gap_interval = {c - delta, c + delta};

  PiecewiseLinear G = quantile_function(d);
  dec.Y = compose_affine(G, 0.0, 1.0 - dec.p);
  PiecewiseLinear W = compose_affine(G, 1.0 - dec.p, 1.0);
  dec.Z = sub(W, dec.Y);
  dec.iota_witness = dec.Z.inf();
  return dec;
}

double verify_distribution(const SiteDistribution& d, const BernoulliDecomposition& dec) {
  PiecewiseLinear W = add(dec.Y, dec.Z);
  std::vector<double> pts(d.breakpoints());
  for (const PiecewiseLinear* f : {&dec.Y, static_cast<const PiecewiseLinear*>(&W)})
    for (const auto& s : f->seg) pts.push_back(s.v0), pts.push_back(s.v1);
  double q = 1.0 - dec.p, sup = 0;
  for (double u : pts) {
    double r = q * dec.Y.pushforward_cdf(u) + dec.p * W.pushforward_cdf(u);
    double rl = q * dec.Y.pushforward_cdf_left(u) + dec.p * W.pushforward_cdf_left(u);
    sup = std::max({sup, std::abs(r - d.cdf(u)), std::abs(rl - d.cdf_left(u))});
  }
  return sup;
}

nlohmann::json to_json(const BernoulliDecomposition& dec) {
  auto segs = [](const PiecewiseLinear& f) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : f.seg) a.push_back({s.t0, s.t1, s.v0, s.v1});
    return a;
  };
  return {{"p", dec.p},
          {"Y", segs(dec.Y)},
          {"Z", segs(dec.Z)},
          {"iota_witness", dec.iota_witness},
          {"gap_interval", {dec.gap_interval.first, dec.gap_interval.second}},
          {"p_minus", dec.window.p_minus},
          {"p_plus", dec.window.p_plus},
          {"iota", dec.window.iota},
          {"K", dec.window.K},
          {"x", dec.x},
          {"k", dec.k},
          {"mirrored", dec.mirrored}};
}

}  // namespace rso
