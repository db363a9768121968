#include "rso/checkers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rso/rng.hpp"

namespace rso {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    default: return "inapplicable";
  }
}

double minimal_alpha(const Hamiltonian& h, double Ebar, double beta) {
  Eigen::MatrixXd R = resolvent(h, Ebar);
  double a = -INFINITY;
  for (int x = 0; x < h.n(); ++x)
    for (int y = 0; y < h.n(); ++y) {
      double d = site_distance(h.box.site(x), h.box.site(y), Metric::Euclidean);
      a = std::max(a, std::log(std::abs(R(x, y))) + beta * d);
    }
  return a;
}

EnergyWindowResult energy_window_check(const Hamiltonian& h, double Ebar, double alpha, double beta, int n_energies,
                                       std::uint64_t seed) {
  EnergyWindowResult out;
  if (!(alpha > beta && beta > 0)) return out;
  const int n = h.n();
  std::vector<double> dist(size_t(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      dist[size_t(x) * n + y] = site_distance(h.box.site(x), h.box.site(y), Metric::Euclidean);
  Eigen::MatrixXd R0;
  try {
    R0 = resolvent(h, Ebar);
  } catch (const ResonanceError&) {
    return out;
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (std::abs(R0(x, y)) > std::exp(alpha - beta * dist[size_t(x) * n + y]) * (1 + 1e-12)) return out;

  out.window = 1.0 / (2.0 * double(n) * std::exp(alpha));
  std::vector<double> energies = {Ebar, Ebar - out.window, Ebar + out.window};
  Stream rng(seed, 0x776e64ULL);
  while (int(energies.size()) < n_energies) energies.push_back(Ebar + out.window * rng.uniform(-1, 1));
  out.energies = int(energies.size());
  for (double E : energies) {
    Eigen::MatrixXd R = resolvent(h, E);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        out.worst_ratio = std::max(out.worst_ratio, std::abs(R(x, y)) / (2 * std::exp(alpha - beta * dist[size_t(x) * n + y])));
  }
  out.verdict = out.worst_ratio <= 1 + 1e-9 ? Verdict::Holds : Verdict::Violated;
  return out;
}

PushResult eigenvalue_push_check(const PushInstance& inst, double c) {
  PushResult out;
  const auto& r = inst.r;
  const int n = int(inst.A.rows());
  auto fail = [&](const char* why) {
    out.failed_premise = why;
    return out;
  };
  if (!(0 < r[0] && r[0] < r[1] && r[1] < r[2] && r[2] < r[3] && r[3] < r[4] && r[4] < 1)) return fail("A");
  if (!(r[0] <= c * std::min(r[2] * r[4], r[1] * r[2] / r[3]))) return fail("B");
  if (inst.k < 0 || inst.k >= n || inst.i < 2 || inst.i > n || inst.j < inst.i || inst.j > n) return fail("indices");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inst.A);
  const Eigen::VectorXd& ev = es.eigenvalues();
  auto E = [&](int d) { return ev(n - d); };  // descending, 1-based
  auto v = [&](int d) { return es.eigenvectors().col(n - d); };
  if (!(0 < E(inst.j) && E(inst.j) <= E(inst.i) && E(inst.i) < r[0] && r[1] < E(inst.i - 1))) return fail("C");
  if (!(v(inst.j)(inst.k) * v(inst.j)(inst.k) >= r[2])) return fail("D");
  double band = 0;
  for (int l = 1; l <= n; ++l)
    if (r[1] < E(l) && E(l) < r[4]) band += v(l)(inst.k) * v(l)(inst.k);
  if (!(band <= r[3])) return fail("E");

  Eigen::MatrixXd B = inst.A;
  B(inst.k, inst.k) += 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(B, Eigen::EigenvaluesOnly);
  out.count_before = (ev.array() >= r[0]).count();
  out.count_after = (es2.eigenvalues().array() >= r[0]).count();
  out.verdict = out.count_after > out.count_before ? Verdict::Holds : Verdict::Violated;
  return out;
}

PushInstance random_push_instance(std::uint64_t seed, std::uint64_t replica, int max_n, double c) {
  Stream rng(seed, 0x70757368ULL, replica);
  PushInstance inst;
  const int n = 2 + int(rng.below(std::uint64_t(std::max(1, max_n - 1))));
  auto& r = inst.r;
  r[4] = rng.uniform(0.5, 0.95);
  r[3] = r[4] * rng.uniform(0.3, 0.9);
  r[2] = r[3] * rng.uniform(0.3, 0.9);
  r[1] = r[2] * rng.uniform(0.05, 0.9);
  r[0] = c * std::min(r[2] * r[4], r[1] * r[2] / r[3]) * rng.uniform(0.05, 1.0);
  inst.k = int(rng.below(std::uint64_t(n)));

  // v_j carries mass w >= r3 at coordinate k; complete to an orthonormal basis
  Eigen::MatrixXd M(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) M(a, b) = rng.normal();
  double w = r[2] + (1 - r[2]) * rng.uniform() * rng.uniform();
  Eigen::VectorXd vj = M.col(0);
  vj(inst.k) = 0;
  if (vj.norm() == 0) vj(inst.k == 0 ? n - 1 : 0) = 1;
  vj *= std::sqrt(1 - w) / vj.norm();
  vj(inst.k) = std::sqrt(w);
  M.col(0) = vj;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ();
  if (Q.col(0).dot(vj) < 0) Q.col(0) *= -1;

  const int nb = 1 + int(rng.below(std::uint64_t(n - 1)));  // eigenvalues below r1, including v_j's
  std::vector<int> rest(static_cast<size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 1);
  std::shuffle(rest.begin(), rest.end(), rng);
  std::vector<double> E(static_cast<size_t>(n));
  E[0] = r[0] * rng.uniform(0.05, 0.95);
  for (int t = 0; t < nb - 1; ++t) E[size_t(rest[size_t(t)])] = r[0] * rng.uniform(0.05, 0.95);
  double band = 0;
  for (size_t t = size_t(nb - 1); t < rest.size(); ++t) {
    int col = rest[t];
    double mk = Q(inst.k, col) * Q(inst.k, col);
    if (band + mk <= r[3] && rng.uniform() < 0.6) {
      band += mk;
      E[size_t(col)] = rng.uniform(r[1], r[4]);
    } else {
      E[size_t(col)] = rng.uniform(r[4], 2.0);
    }
  }
  Eigen::VectorXd ev = Eigen::Map<Eigen::VectorXd>(E.data(), n);
  inst.A = Q * ev.asDiagonal() * Q.transpose();
  inst.A = 0.5 * (inst.A + inst.A.transpose());

  // descending ranks
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return E[size_t(a)] > E[size_t(b)]; });
  for (int d = 0; d < n; ++d)
    if (order[size_t(d)] == 0) inst.j = d + 1;
  inst.i = n - nb + 1;
  return inst;
}

OrthogonalityResult almost_orthogonal_count(const Eigen::MatrixXd& V) {
  OrthogonalityResult out;
  out.n = int(V.rows());
  out.m = int(V.cols());
  out.bound = (5.0 - std::sqrt(5.0)) * out.n / 2.0;
  if (out.m == 0 || out.n == 0) return out;
  Eigen::MatrixXd G = V.transpose() * V - Eigen::MatrixXd::Identity(out.m, out.m);
  out.max_deviation = G.cwiseAbs().maxCoeff();
  if (!(out.max_deviation < 1.0 / std::sqrt(5.0 * out.n))) return out;
  out.verdict = out.m <= out.bound ? Verdict::Holds : Verdict::Violated;
  return out;
}

MassSquare large_mass_square_search(const Eigen::VectorXd& psi, const Square& box, const std::vector<Square>& avoid, int Lp) {
  if (psi.size() != box.area()) throw std::invalid_argument("large_mass_square_search: field does not match box");
  if (Lp < 1 || Lp > box.side) throw std::invalid_argument("large_mass_square_search: bad side");
  const double total = psi.cwiseAbs().maxCoeff();
  if (total == 0) throw std::invalid_argument("large_mass_square_search: zero field");
  MassSquare best;
  bool found = false;
  for (int cy = box.y0(); cy + Lp - 1 <= box.y1(); ++cy)
    for (int cx = box.x0(); cx + Lp - 1 <= box.x1(); ++cx) {
      Square q{{cx, cy}, Lp};
      Square dbl = scale_square(q, 2.0);
      if (!box.contains(dbl)) continue;
      bool clear = true;
      for (const auto& a : avoid) clear = clear && !dbl.intersects(a);
      if (!clear) continue;
      double m = 0;
      for (int y = cy; y < cy + Lp; ++y)
        for (int x = cx; x < cx + Lp; ++x) m = std::max(m, std::abs(psi(box.index({x, y}))));
      if (!found || m > best.ratio * total) {
        found = true;
        best.square = q;
        best.ratio = m / total;
      }
    }
  if (!found) throw std::runtime_error("large_mass_square_search: no admissible square");
  best.implied_C = best.ratio > 0 ? -std::log(best.ratio) / Lp : INFINITY;
  return best;
}

}  // namespace rso
