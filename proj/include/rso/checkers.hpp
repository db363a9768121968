#pragma once
// Deterministic lemma checkers: each one gates on the lemma's premises,
// evaluates the conclusion directly and reports the margin.
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rso/geometry.hpp"
#include "rso/spectral.hpp"

namespace rso {

enum class Verdict { Holds, Violated, Inapplicable };
const char* to_string(Verdict v);

struct EnergyWindowResult {
  Verdict verdict = Verdict::Inapplicable;
  double window = 0;       // 1 / (2 |box| e^alpha)
  double worst_ratio = 0;  // max |R_E(x,y)| / (2 e^{alpha - beta|x-y|}) over sampled E
  int energies = 0;
};
// smallest alpha with |R_Ebar(x,y)| <= e^{alpha - beta|x-y|} everywhere
double minimal_alpha(const Hamiltonian& h, double Ebar, double beta);
EnergyWindowResult energy_window_check(const Hamiltonian& h, double Ebar, double alpha, double beta, int n_energies = 9,
                                       std::uint64_t seed = 0);

struct PushInstance {
  Eigen::MatrixXd A;
  int k = 0;
  std::array<double, 5> r{};
  int i = 0, j = 0;  // 1-based descending indices
};

struct PushResult {
  Verdict verdict = Verdict::Inapplicable;
  std::string failed_premise;
  long count_before = 0, count_after = 0;  // eigenvalues >= r1
};
PushResult eigenvalue_push_check(const PushInstance& inst, double c = 1.0 / 16);
// random instance aimed at the premises; callers still gate on the check
PushInstance random_push_instance(std::uint64_t seed, std::uint64_t replica, int max_n = 12, double c = 1.0 / 16);

struct OrthogonalityResult {
  Verdict verdict = Verdict::Inapplicable;
  int m = 0, n = 0;
  double max_deviation = 0;  // max |<v_i,v_j> - delta_ij|
  double bound = 0;          // (5 - sqrt 5) n / 2
};
// columns of V are the vectors
OrthogonalityResult almost_orthogonal_count(const Eigen::MatrixXd& V);

struct MassSquare {
  Square square;
  double ratio = 0;      // |psi|_inf(square) / |psi|_inf(box)
  double implied_C = 0;  // -log(ratio) / L'
};
// throws std::runtime_error when no admissible square exists
MassSquare large_mass_square_search(const Eigen::VectorXd& psi, const Square& box, const std::vector<Square>& avoid, int Lp);

}  // namespace rso
