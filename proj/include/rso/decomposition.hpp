#pragma once
// Constructive decomposition X = Y(t) + Z(t) xi with t uniform on (0,1) and
// xi ~ Bernoulli(p), for laws on [0,M] that are anti-concentrated.
#include <utility>
#include <vector>

#include "json.hpp"
#include "rso/ensembles.hpp"

namespace rso {

// linear on the open interval (t0,t1), running from limit v0 to limit v1
struct Segment {
  double t0 = 0, t1 = 1, v0 = 0, v1 = 0;
};

struct PiecewiseLinear {
  std::vector<Segment> seg;  // consecutive, covering (0,1)
  double operator()(double t) const;
  double inf() const;
  double sup() const;
  // P[f(U) <= u] and P[f(U) < u] for U uniform on (0,1)
  double pushforward_cdf(double u) const;
  double pushforward_cdf_left(double u) const;
};

// pointwise sum after merging knot sets
PiecewiseLinear add(const PiecewiseLinear& a, const PiecewiseLinear& b);
PiecewiseLinear sub(const PiecewiseLinear& a, const PiecewiseLinear& b);

// the quantile function G on (0,1) as segments
PiecewiseLinear quantile_function(const SiteDistribution& d);
// t -> G(lo + (hi - lo) t)
PiecewiseLinear compose_affine(const PiecewiseLinear& g, double lo, double hi);

struct UniformWindow {
  double p_minus = 0, p_plus = 1, iota = 0;
  double gamma_eff = 0;  // min(gamma, M/4)
  int K = 0;
};

UniformWindow uniform_parameter_bounds(double gamma, double rho, double M);

struct BernoulliDecomposition {
  double p = 0.5;
  PiecewiseLinear Y, Z;
  double iota_witness = 0;  // inf Z over the breakpoint set
  std::pair<double, double> gap_interval{0, 0};
  UniformWindow window;
  double x = 0;  // window centre of large mass
  int k = 0;     // first interval of the low-mass pair
  bool mirrored = false;
};

BernoulliDecomposition decompose(const SiteDistribution& d, double gamma, double rho);

// sup over u of |CDF of Y + Z xi minus CDF of d|
double verify_distribution(const SiteDistribution& d, const BernoulliDecomposition& dec);

nlohmann::json to_json(const BernoulliDecomposition& dec);

}  // namespace rso
