#pragma once
// Multiscale bookkeeping at desk scale: scale schedules, frozen sets,
// good/bad/ready classification, hereditary bad chains, the deterministic
// propagation lemma and the initial-scale net probe.
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rso/ensembles.hpp"
#include "rso/geometry.hpp"
#include "rso/spectral.hpp"

namespace rso {

struct ScaleSchedule {
  double eps = 0, nu = 0, delta = 0, C_eta = 1;
  int M_tilde = 0;
  std::vector<int> log2L;
  std::vector<double> m;    // decay rates
  std::vector<double> eta;  // eps^2 + C_eta sum_{j<=k} L_j^{-eps}
  bool window_ok = false;   // delta/4 log L_{k+M} <= log L_k <= delta log L_{k+M} wherever defined
  int smallest_window_M = -1;
  bool eta_ok = false;      // eta_k < eps for all k
  double L(int k) const;
};

// M = ceil(-log2(delta) / (1 - 6 eps))
int mtilde(double eps, double delta);
// throws std::invalid_argument on infeasible parameters
ScaleSchedule build_schedule(double eps, double nu, double delta, long L0, int depth, double C_eta = 1.0);

struct FrozenSetState {
  int k = 0;
  SiteSet sites;
  double eta = 0;
  int pitch = 0;
};

int base_pitch(double eps);  // ceil(2 / eps^2)
// pitch * Z^2 inside domain; thin keeps (iP, jP) with i + j even
FrozenSetState base_frozen_set(double eps, const Square& domain, bool thin = false);

struct GoodnessTest {
  double exponent = 1;  // e^{exponent - m |x-y|}, times 2
  double m = 1;
  double Ebar_max = 0;
  int n_energies = 3;   // grid on [0, Ebar_max]
  long trials = 8;
};

struct BoxClassification {
  Square square;
  bool good = false;
  bool ready = false;
  long hereditary_chains = 0;
  long hereditary_distinct = 0;
  long trials_used = 0;
  double worst_log_margin = -1e300;  // max log|R| - log bound over trials and energies
};

// all trials resampling the unfrozen sites must satisfy the resolvent bound
BoxClassification classify_square(const Square& sq, const GoodnessTest& test, const FrozenAssignment& frozen,
                                  const EnsembleSpec& spec, std::uint64_t seed);

// bad flags for the aligned squares of one side, keyed by corner
struct ScaleVerdicts {
  int side = 0;
  std::map<Site, bool> bad;
};

struct HereditaryCount {
  long chains = 0;    // nested bad chains of length M below the square
  long distinct = 0;  // distinct bottom squares of those chains
};
// levels[0] is one scale down from sq, levels[M-1] is M scales down
HereditaryCount hereditary_bad_count(const Square& sq, const std::vector<ScaleVerdicts>& levels);

struct FreezeReport {
  long added = 0;
  long bound = 0;  // ready squares * N * (alpha L_{k-1})^2
  bool per_square_ok = true;
  bool regularity_ok = true;
  std::vector<std::string> flags;
};
struct ReadyCover {
  Square square;
  std::vector<Square> covers;
};
FrozenSetState freeze_update(const FrozenSetState& prev, const std::vector<ReadyCover>& ready, double eta_next, int N,
                             double alpha, int L_prev, const std::vector<TiltedRect>& regularity_probes,
                             FreezeReport* report = nullptr);

struct DetMsaScales {
  int L0 = 32, L1 = 16, L2 = 8, L3 = 1, L4 = 4, L5 = 4, L6 = 2;
  double m = 1, nu = 0.5;
  double m_tilde() const;
};
struct DetMsaInstance {
  Square box;
  std::vector<double> V;  // row-major over box
  double E = 0;
  std::vector<Square> defects;
  DetMsaScales sc;
};
struct DetMsaResult {
  bool applicable = false;
  std::string gate;  // first failed hypothesis
  bool holds = false;
  double worst_margin = 0;      // max log|R| + m~|x-y| - L1
  double empirical_m = 0;       // largest rate with |R| <= e^{L1 - rate |x-y|}
  double alpha_log = 0;         // max log|R| + m~ d(x,y) with the defect graph distance
  long good_squares_used = 0;
};
DetMsaResult deterministic_propagation(const DetMsaInstance& inst);
// high potential outside, low potential in defect cores
DetMsaInstance random_detmsa_instance(std::uint64_t seed, std::uint64_t replica, int max_side = 32);

struct NetProbe {
  long trials = 0, nets = 0;
  double net_frequency = 0;
  double union_bound = 0;  // sum_y P[V < kappa]^{|B(y,R) cap F|}
  double R_tilde = 0;
  double C = 0, c = 0;     // mean fitted log|G| ~ C R~ - c |x-y| / R~ over net samples
  long fitted = 0;
};
// relaxed drops the requirement side >= R^2 log R
NetProbe initial_scale_probe(const EnsembleSpec& spec, double kappa, double R, const Square& box, const SiteSet& F,
                             long trials, std::uint64_t seed, bool relaxed = false);

struct DeskMsaConfig {
  int domain = 32;
  std::vector<int> scales = {4, 8, 16, 32};
  int M_tilde = 2;
  int N = 4;
  int cover_alpha = 1;  // covers of side 2 L_{k-1} * [1, cover_alpha]
  double eps = 0.25, nu = 0.2, delta = 0.125, C_eta = 1;
  bool thin = false;
  double Ebar_max = 0.01;
  int n_energies = 3;
  long trials = 4;
};
struct DeskScaleRow {
  int k = 0, side = 0;
  long squares = 0, bad = 0, ready = 0, not_ready = 0;
  long frozen = 0, added = 0, growth_bound = 0;
  bool growth_ok = true, regularity_ok = true;
  double eta = 0, m = 0;
  long max_hereditary = 0;
};
struct DeskMsaResult {
  std::vector<DeskScaleRow> rows;
  std::vector<BoxClassification> classes;
};
DeskMsaResult run_desk_msa(const DeskMsaConfig& cfg, const EnsembleSpec& spec, std::uint64_t seed);

nlohmann::json to_json(const ScaleSchedule& s);

}  // namespace rso
