#pragma once
// Unique continuation in tilted coordinates: extension of solutions of
// H psi = E psi from the west boundary, growth fits, the zero-column
// alternating sum and Monte Carlo estimates of the continuation events.
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rso/ensembles.hpp"
#include "rso/geometry.hpp"
#include "rso/stats.hpp"

namespace rso {

// dense storage over the (s,t) grid of a tilted rectangle; entries with
// s+t odd are not lattice sites and stay 0
struct TiltedField {
  TiltedRect rect;
  std::vector<double> values;

  TiltedField() = default;
  explicit TiltedField(const TiltedRect& r);
  std::size_t slot(int s, int t) const { return std::size_t(s - rect.s.lo) * rect.t.size() + std::size_t(t - rect.t.lo); }
  double at(int s, int t) const { return values[slot(s, t)]; }
  double& at(int s, int t) { return values[slot(s, t)]; }
  double sup() const;
  double sup_on(const TiltedRect& sub) const;
};

// keyed by (s,t); must cover the west boundary exactly
using WestBoundaryData = std::map<std::pair<int, int>, double>;

// uniform(-1,1) data on the west boundary; zero_first_two zeroes the rows
// t = t.lo, t.lo+1 and rescales so the remaining data has sup norm 1
WestBoundaryData random_west_data(const TiltedRect& r, std::uint64_t seed, std::uint64_t replica, bool zero_first_two);

TiltedField tilted_potential(const TiltedRect& r, const PotentialField& f);
TiltedField sample_tilted_potential(const EnsembleSpec& spec, const TiltedRect& r, const FrozenAssignment& frozen,
                                    std::uint64_t seed, std::uint64_t replica);

// targets swept in increasing s, then t; each interior equation is solved
// for its north-east neighbour
TiltedField extend_from_west(const TiltedRect& r, const WestBoundaryData& data, double E, const TiltedField& V);
// same extension with targets visited in the given order (must respect
// the dependency order; throws otherwise)
TiltedField extend_in_order(const TiltedRect& r, const WestBoundaryData& data, double E, const TiltedField& V,
                            const std::vector<std::pair<int, int>>& order);

// max over interior sites of |(4+V-E)psi_m - sum of neighbours| divided by
// max(1, sum of the absolute terms)
double eigen_residual(const TiltedField& psi, const TiltedField& V, double E);

struct GrowthSample {
  int a = 0, b = 0;
  double log_ratio = 0;  // log(|psi|_inf / |data|_inf)
};
std::vector<GrowthSample> growth_samples(const EnsembleSpec& spec, int a, int b, int n, std::uint64_t seed);

struct GrowthCell {
  int a = 0, b = 0, n = 0;
  double mean_log_ratio = 0, max_log_ratio = 0;
  double C1 = 0;  // max_log_ratio / (b log a)
};
struct GrowthFit {
  double slope = 0, intercept = 0;  // log ratio ~ slope * b log a + intercept
  double max_ratio = 0;
  std::vector<GrowthCell> cells;
};
// needs at least 20 samples in every (a,b) cell
GrowthFit fit_growth_constant(const std::vector<GrowthSample>& samples);

// |psi_0 - psi_1|_inf / (|E1 - E0| |data|_inf); 0 when E0 == E1
double energy_variation_gap(const TiltedRect& r, const TiltedField& V, const WestBoundaryData& data, double E0, double E1);

// alternating-sum value of psi at target when the data vanishes on the
// first two t-rows; returns |formula - extension| / max(1, |extension|)
double zero_column_formula(const TiltedField& psi, const TiltedField& V, double Ebar, int s, int t);
double zero_column_formula_check(const TiltedRect& r, const TiltedField& V, const WestBoundaryData& data, double Ebar,
                                 std::pair<int, int> target);

struct BestRow {
  int s0 = 0, t0 = 0;
  double min_abs = 0;
  double implied_C2 = 0;  // -log(min_abs / |psi^0|_inf) / (b log a)
};
BestRow best_row_search(const TiltedField& psi);

struct EventEstimate {
  long hits = 0, trials = 0;
  double frequency = 0;
  Interval95 ci;
};

struct NiParams {
  double Ebar = 0, alpha = 0.5, eps = 0.01;
  double threshold_exponent = 0.5;  // threshold e^{-threshold_exponent * alpha b log a}
  long trials = 100;
  int boundary_samples = 4;
  bool relaxed = false;  // skip a >= alpha b^2 log a
};
EventEstimate ni_event_mc(const EnsembleSpec& spec, const TiltedRect& r, const NiParams& p, const FrozenAssignment& frozen,
                          std::uint64_t seed);

struct UcParams {
  double Ebar = 0, alpha = 1, eps = 0.1;
  long trials = 100;
};
struct UcEstimate : EventEstimate {
  long vacuous = 0;  // samples with no eigenvalue in the window
  double worst_log_ratio = -1e300;  // max log(|psi|_inf on half box) - alpha L log L
};
UcEstimate uc_event_mc(const EnsembleSpec& spec, const Square& box, const UcParams& p, const FrozenAssignment& frozen,
                       std::uint64_t seed);

std::string tilted_csv(const TiltedField& f, const std::string& manifest_line);

}  // namespace rso
