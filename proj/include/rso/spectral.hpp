#pragma once
// H = -Laplacian + V on a box with Dirichlet truncation, dense eigensolves,
// resolvents, banded LDL^T inertia counts and resonance Monte Carlo.
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rso/ensembles.hpp"
#include "rso/geometry.hpp"
#include "rso/stats.hpp"

namespace rso {

struct Hamiltonian {
  Square box;
  std::vector<double> diag;  // 4 + V, row-major over box
  int n() const { return int(diag.size()); }
  Eigen::MatrixXd dense() const;
  // restriction to a sub-square (Dirichlet)
  Hamiltonian restrict_to(const Square& inner) const;
  double potential(Site p) const { return diag[std::size_t(box.index(p))] - 4.0; }
};

Hamiltonian assemble(const Square& box, const PotentialField& v);
Hamiltonian assemble(const Square& box, const std::vector<double>& v);

class ResonanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectralData {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
  double max_residual = 0, max_orth_dev = 0;
  // E_1 >= E_2 >= ... view, 1-based
  double descending(int i) const { return values(values.size() - i); }
};

SpectralData eigensolve(const Hamiltonian& h);

// (H - E)^{-1}; throws ResonanceError when E is within 1e-12 of the spectrum
Eigen::MatrixXd resolvent(const Hamiltonian& h, double E);
double resolvent_norm(const Hamiltonian& h, double E);

// number of eigenvalues strictly below sigma, by Sylvester inertia of a
// banded LDL^T factorization of H - sigma
long count_below(const Hamiltonian& h, double sigma);
long count_in_open_window(const Hamiltonian& h, double lo, double hi);
double lambda_min(const Hamiltonian& h, double tol = 1e-10);

struct GeometricResolventCheck {
  double max_residual = 0;
  double worst_bound_ratio = 0;  // max |R(x,y)| / (|R'(x,y)| + |dL'| max pair product)
  bool bound_holds = false;
  std::size_t boundary_pairs = 0;
};
GeometricResolventCheck geometric_resolvent_check(const Hamiltonian& h, const Square& inner, double E);

struct McEstimate {
  long hits = 0, trials = 0;
  double p_hat = 0;
  Interval95 ci;
};

// frequency of dist(spectrum, Ebar) < e^{-L1}
McEstimate wegner_mc(const EnsembleSpec& spec, const Square& box, double Ebar, double L1, const FrozenAssignment& frozen,
                     long trials, std::uint64_t seed);

struct LowSpectrum {
  int side = 0;
  std::vector<double> lambda_min;  // sorted ascending
  double fraction_below(double e) const;
  double quantile(double q) const;
};
std::vector<LowSpectrum> low_spectrum_histogram(const EnsembleSpec& spec, const std::vector<int>& sides, long trials,
                                                std::uint64_t seed);
// frequency of lambda_min < e without resolving lambda_min
McEstimate low_spectrum_probability(const EnsembleSpec& spec, int side, double e, long trials, std::uint64_t seed);

struct ResonanceLadder {
  double L1 = 0, L2 = 0, L4 = 0, C = 1;
  double level(int l) const;  // e^{-L1 + l (L2 - L4 + C)}
};

}  // namespace rso
