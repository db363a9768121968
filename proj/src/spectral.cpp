#include "rso/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rso/kernels.hpp"
#include "rso/rng.hpp"

namespace rso {

Eigen::MatrixXd Hamiltonian::dense() const {
  const int n = this->n(), L = box.side;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    H(i, i) = diag[size_t(i)];
    int x = i % L, y = i / L;
    if (x + 1 < L) H(i, i + 1) = H(i + 1, i) = -1.0;
    if (y + 1 < L) H(i, i + L) = H(i + L, i) = -1.0;
  }
  return H;
}

Hamiltonian Hamiltonian::restrict_to(const Square& inner) const {
  if (!box.contains(inner)) throw std::invalid_argument("restrict_to: inner not inside box");
  Hamiltonian r;
  r.box = inner;
  r.diag.resize(size_t(inner.area()));
  for (int i = 0; i < int(inner.area()); ++i) r.diag[size_t(i)] = diag[size_t(box.index(inner.site(i)))];
  return r;
}

Hamiltonian assemble(const Square& box, const std::vector<double>& v) {
  if (long(v.size()) != box.area()) throw std::invalid_argument("assemble: potential does not cover the box");
  Hamiltonian h;
  h.box = box;
  h.diag.resize(v.size());
  for (size_t i = 0; i < v.size(); ++i) h.diag[i] = 4.0 + v[i];
  return h;
}

Hamiltonian assemble(const Square& box, const PotentialField& f) {
  if (!f.box.contains(box)) throw std::invalid_argument("assemble: potential does not cover the box");
  std::vector<double> v(size_t(box.area()));
  for (int i = 0; i < int(box.area()); ++i) v[size_t(i)] = f.at(box.site(i));
  return assemble(box, v);
}

SpectralData eigensolve(const Hamiltonian& h) {
  Eigen::MatrixXd H = h.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolve: no convergence");
  SpectralData s;
  s.values = es.eigenvalues();
  s.vectors = es.eigenvectors();
  Eigen::MatrixXd R = H * s.vectors - s.vectors * s.values.asDiagonal();
  s.max_residual = R.colwise().norm().maxCoeff();
  Eigen::MatrixXd G = s.vectors.transpose() * s.vectors - Eigen::MatrixXd::Identity(h.n(), h.n());
  s.max_orth_dev = G.cwiseAbs().maxCoeff();
  return s;
}

long count_below(const Hamiltonian& h, double sigma) {
  const int n = h.n(), b = h.box.side;
  // row i of L holds columns k in [i-b, i-1] at offset k - (i-b); W = L*D
  std::vector<double> Lrow(size_t(n) * b, 0.0), D(size_t(n), 0.0);
  const double tiny = 1e-300;
  long neg = 0;
  for (int i = 0; i < n; ++i) {
    double* Li = &Lrow[size_t(i) * b];
    const int k_lo = std::max(0, i - b);
    for (int j = k_lo; j < i; ++j) {
      double a = 0;
      if (j == i - 1 && i % b != 0) a = -1.0;
      if (j == i - b) a = -1.0;
      const double* Lj = &Lrow[size_t(j) * b];
      int k0 = std::max(k_lo, j - b), len = j - k0;
      double s = len > 0 ? kernels::dot3(Li + (k0 - (i - b)), Lj + (k0 - (j - b)), &D[size_t(k0)], size_t(len)) : 0.0;
      Li[j - (i - b)] = (a - s) / D[size_t(j)];
    }
    int len = i - k_lo;
    double s = len > 0 ? kernels::dot3(Li + (k_lo - (i - b)), Li + (k_lo - (i - b)), &D[size_t(k_lo)], size_t(len)) : 0.0;
    double d = h.diag[size_t(i)] - sigma - s;
    if (d == 0) d = tiny;
    D[size_t(i)] = d;
    if (d < 0) ++neg;
  }
  return neg;
}

long count_in_open_window(const Hamiltonian& h, double lo, double hi) {
  if (!(lo < hi)) return 0;
  long above_lo = h.n() - count_below(h, std::nextafter(lo, INFINITY));
  long below_hi = count_below(h, hi);
  return std::max(0L, below_hi - (h.n() - above_lo));
}

double lambda_min(const Hamiltonian& h, double tol) {
  double lo = *std::min_element(h.diag.begin(), h.diag.end()) - 4.0;
  double hi = *std::min_element(h.diag.begin(), h.diag.end()) + 4.0;
  lo = std::min(lo, hi) - 1e-9;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (count_below(h, mid) > 0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// max |((H - E) R - I)(i,j)| using the five-point stencil, O(n^2)
double stencil_residual(const Hamiltonian& h, double E, const Eigen::MatrixXd& R) {
  const int n = h.n(), L = h.box.side;
  double worst = 0;
  for (int j = 0; j < n; ++j) {
    auto c = R.col(j);
    for (int i = 0; i < n; ++i) {
      int x = i % L, y = i / L;
      double v = (h.diag[size_t(i)] - E) * c(i);
      if (x > 0) v -= c(i - 1);
      if (x + 1 < L) v -= c(i + 1);
      if (y > 0) v -= c(i - L);
      if (y + 1 < L) v -= c(i + L);
      if (i == j) v -= 1.0;
      worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

}  // namespace

Eigen::MatrixXd resolvent(const Hamiltonian& h, double E) {
  if (count_in_open_window(h, E - 1e-12, E + 1e-12) > 0)
    throw ResonanceError("resolvent: E within 1e-12 of the spectrum");
  Eigen::MatrixXd A = h.dense();
  A.diagonal().array() -= E;
  Eigen::MatrixXd R = A.ldlt().solve(Eigen::MatrixXd::Identity(h.n(), h.n()));
  // the symmetric indefinite LDLT can lose accuracy; fall back to LU
  if (!(stencil_residual(h, E, R) <= 1e-10 * std::max(1.0, R.cwiseAbs().maxCoeff())))
    R = A.partialPivLu().solve(Eigen::MatrixXd::Identity(h.n(), h.n()));
  return R;
}

double resolvent_norm(const Hamiltonian& h, double E) {
  SpectralData s = eigensolve(h);
  double d = (s.values.array() - E).abs().minCoeff();
  if (d < 1e-12) throw ResonanceError("resolvent_norm: E within 1e-12 of the spectrum");
  return 1.0 / d;
}

GeometricResolventCheck geometric_resolvent_check(const Hamiltonian& h, const Square& inner, double E) {
  auto pairs = box_boundary(inner, h.box);
  Eigen::MatrixXd R = resolvent(h, E);
  Hamiltonian hi = h.restrict_to(inner);
  Eigen::MatrixXd Ri = resolvent(hi, E);
  GeometricResolventCheck out;
  out.boundary_pairs = pairs.size();
  out.bound_holds = true;
  const int n = h.n();
  for (int xi = 0; xi < int(inner.area()); ++xi) {
    Site x = inner.site(xi);
    int X = h.box.index(x);
    for (int Y = 0; Y < n; ++Y) {
      Site y = h.box.site(Y);
      double rp = inner.contains(y) ? Ri(xi, inner.index(y)) : 0.0;
      double sum = rp, maxpair = 0;
      for (const auto& [u, v] : pairs) {
        double term = Ri(xi, inner.index(u)) * R(h.box.index(v), Y);
        sum += term;
        maxpair = std::max(maxpair, std::abs(term));
      }
      out.max_residual = std::max(out.max_residual, std::abs(R(X, Y) - sum));
      double bound = std::abs(rp) + double(pairs.size()) * maxpair;
      double lhs = std::abs(R(X, Y));
      if (lhs > bound * (1 + 1e-12) + 1e-300) out.bound_holds = false;
      if (bound > 0) out.worst_bound_ratio = std::max(out.worst_bound_ratio, lhs / bound);
    }
  }
  return out;
}

McEstimate wegner_mc(const EnsembleSpec& spec, const Square& box, double Ebar, double L1, const FrozenAssignment& frozen,
                     long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("wegner_mc: trials must be positive");
  const double delta = std::exp(-L1);
  McEstimate m;
  m.trials = trials;
  for (long t = 0; t < trials; ++t) {
    Hamiltonian h = assemble(box, sample_potential(spec, box, frozen, seed, std::uint64_t(t)));
    if (count_below(h, Ebar + delta) == 0) continue;
    if (count_in_open_window(h, Ebar - delta, Ebar + delta) > 0) ++m.hits;
  }
  m.p_hat = double(m.hits) / double(trials);
  m.ci = wilson(m.hits, trials);
  return m;
}

double LowSpectrum::fraction_below(double e) const {
  if (lambda_min.empty()) return 0.0;
  auto it = std::lower_bound(lambda_min.begin(), lambda_min.end(), e);
  return double(it - lambda_min.begin()) / double(lambda_min.size());
}

double LowSpectrum::quantile(double q) const {
  if (lambda_min.empty()) throw std::invalid_argument("quantile: empty sample");
  size_t i = size_t(std::clamp(q, 0.0, 1.0) * double(lambda_min.size() - 1) + 0.5);
  return lambda_min[i];
}

std::vector<LowSpectrum> low_spectrum_histogram(const EnsembleSpec& spec, const std::vector<int>& sides, long trials,
                                                std::uint64_t seed) {
  std::vector<LowSpectrum> out;
  for (int L : sides) {
    Square box{{0, 0}, L};
    LowSpectrum s;
    s.side = L;
    std::uint64_t key = key_combine(seed, std::uint64_t(L));
    for (long t = 0; t < trials; ++t)
      s.lambda_min.push_back(lambda_min(assemble(box, sample_potential(spec, box, {}, key, std::uint64_t(t))), 1e-9));
    std::sort(s.lambda_min.begin(), s.lambda_min.end());
    out.push_back(std::move(s));
  }
  return out;
}

McEstimate low_spectrum_probability(const EnsembleSpec& spec, int side, double e, long trials, std::uint64_t seed) {
  Square box{{0, 0}, side};
  McEstimate m;
  m.trials = trials;
  std::uint64_t key = key_combine(seed, std::uint64_t(side));
  for (long t = 0; t < trials; ++t)
    if (count_below(assemble(box, sample_potential(spec, box, {}, key, std::uint64_t(t))), e) > 0) ++m.hits;
  m.p_hat = trials > 0 ? double(m.hits) / double(trials) : 0.0;
  m.ci = wilson(m.hits, trials);
  return m;
}

double ResonanceLadder::level(int l) const { return std::exp(-L1 + l * (L2 - L4 + C)); }

}  // namespace rso
