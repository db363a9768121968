#include "rso/sperner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rso/kernels.hpp"
#include "rso/rng.hpp"

namespace rso {

ProductLaw::ProductLaw(std::vector<double> probs) : p(std::move(probs)) {
  if (p.empty()) throw std::invalid_argument("product law: N must be >= 1");
  for (double x : p)
    if (!(x > 0 && x < 1)) throw std::invalid_argument("product law: probabilities must lie in (0,1)");
}

double ProductLaw::beta() const {
  double b = 1;
  for (double x : p) b = std::min({b, x, 1 - x});
  return b;
}

double ProductLaw::prob(Mask eta) const {
  double r = 1;
  for (size_t i = 0; i < p.size(); ++i) r *= (eta >> i) & 1u ? p[i] : 1 - p[i];
  return r;
}

std::vector<double> layer_law(const ProductLaw& law) {
  std::vector<double> a{1.0}, b;
  for (double p : law.p) {
    b.resize(a.size() + 1);
    kernels::binomial_step(a.data(), b.data(), a.size(), p);
    a.swap(b);
  }
  return a;
}

double elementary_symmetric(const std::vector<double>& q, std::size_t k) {
  std::vector<double> e(k + 1, 0.0);
  e[0] = 1;
  for (double x : q)
    for (size_t j = k; j >= 1; --j) e[j] += x * e[j - 1];
  return e[k];
}

SubsetFamily::SubsetFamily(int n_, std::vector<Mask> m) : n(n_), members(std::move(m)) {
  if (n < 1 || n > 30) throw std::invalid_argument("subset family: n outside [1,30]");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (Mask x : members)
    if (x >> n) throw std::invalid_argument("subset family: member outside ground set");
}

bool SubsetFamily::is_antichain() const {
  for (Mask a : members)
    for (Mask b : members)
      if (a != b && (a & b) == a) return false;
  return true;
}

nlohmann::json to_json(const SubsetFamily& f) {
  nlohmann::json m = nlohmann::json::array();
  char buf[16];
  for (Mask x : f.members) {
    std::snprintf(buf, sizeof buf, "0x%x", x);
    m.push_back(buf);
  }
  return {{"n", f.n}, {"members", m}};
}

SubsetFamily family_from_json(const nlohmann::json& j) {
  std::vector<Mask> m;
  for (const auto& s : j.at("members")) m.push_back(Mask(std::stoul(s.get<std::string>(), nullptr, 16)));
  return SubsetFamily(j.at("n").get<int>(), std::move(m));
}

KappaResult kappa_sperner_max(const SubsetFamily& f) {
  const Mask full = f.n == 32 ? ~0u : ((1u << f.n) - 1);
  KappaResult r;
  r.kappa = 1.0;
  for (Mask eta : f.members) {
    Mask comp = full & ~eta, cover = 0;
    for (Mask other : f.members)
      if (other != eta && (other & eta) == eta) cover |= other;
    Mask B = comp & ~cover;
    r.witness.push_back(B);
    if (comp != 0) r.kappa = std::min(r.kappa, double(std::popcount(B)) / std::popcount(comp));
  }
  return r;
}

LymSums lym_sums(const SubsetFamily& f, const ProductLaw& law) {
  if (int(law.N()) != f.n) throw std::invalid_argument("lym_sums: law and family disagree on N");
  LymSums s;
  s.kappa = kappa_sperner_max(f).kappa;
  s.beta = law.beta();
  std::vector<double> layer = layer_law(law), in_layer(law.N() + 1, 0.0);
  const int N = f.n;
  for (Mask eta : f.members) {
    int k = std::popcount(eta);
    s.classical += 1.0 / std::exp(std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0));
    in_layer[size_t(k)] += law.prob(eta);
  }
  for (int k = 0; k <= N; ++k)
    if (in_layer[size_t(k)] > 0) s.weighted += in_layer[size_t(k)] / layer[size_t(k)];
  s.classical_bound = s.kappa > 0 ? 1.0 / s.kappa : INFINITY;
  s.weighted_bound = s.kappa > 0 ? (1 - s.beta) * (1 - s.beta) / (s.beta * s.beta * s.kappa) : INFINITY;
  return s;
}

std::vector<double> chain_step_weights(const ProductLaw& law, Mask psi) {
  const int N = int(law.N());
  const int k = std::popcount(psi);
  if (k >= N) throw std::invalid_argument("chain step: psi is already the full set");
  std::vector<double> q(law.N());
  for (int i = 0; i < N; ++i) q[size_t(i)] = law.p[size_t(i)] / (1 - law.p[size_t(i)]);
  std::vector<double> w(law.N(), 0.0);
  // dp[s][i]: sum over eta of size s with |eta & psi| = i of prod q
  std::vector<double> dp(size_t(k + 1) * (k + 1));
  for (int j = 0; j < N; ++j) {
    if ((psi >> j) & 1u) continue;
    std::fill(dp.begin(), dp.end(), 0.0);
    dp[0] = 1;
    for (int l = 0; l < N; ++l) {
      if (l == j) continue;
      bool in = (psi >> l) & 1u;
      for (int s = k; s >= 1; --s)
        for (int i = (in ? s : s - 1); i >= (in ? 1 : 0); --i) {
          int pi = in ? i - 1 : i;
          if (pi > s - 1) continue;
          dp[size_t(s) * (k + 1) + i] += q[size_t(l)] * dp[size_t(s - 1) * (k + 1) + pi];
        }
    }
    double h = 0;
    for (int i = 0; i <= k; ++i) h += dp[size_t(k) * (k + 1) + i] / double(k - i + 1);
    w[size_t(j)] = q[size_t(j)] * h;
  }
  return w;
}

std::vector<double> chain_step_distribution(const ProductLaw& law, Mask psi) {
  std::vector<double> w = chain_step_weights(law, psi);
  double s = 0;
  for (double x : w) s += x;
  for (double& x : w) x /= s;
  return w;
}

std::vector<Mask> sample_chain(const ProductLaw& law, std::uint64_t seed, std::uint64_t replica) {
  Stream rng(seed, 0x636861696eULL, replica);
  std::vector<Mask> chain{0};
  Mask psi = 0;
  for (size_t k = 0; k < law.N(); ++k) {
    std::vector<double> pmf = chain_step_distribution(law, psi);
    double u = rng.uniform(), acc = 0;
    int pick = -1;
    for (size_t j = 0; j < pmf.size(); ++j) {
      if (pmf[j] <= 0) continue;
      pick = int(j);
      acc += pmf[j];
      if (u < acc) break;
    }
    psi |= Mask(1) << pick;
    chain.push_back(psi);
  }
  return chain;
}

std::vector<double> chain_marginal(const ProductLaw& law, std::size_t k) {
  const size_t N = law.N();
  if (N > 24) throw std::invalid_argument("chain_marginal: N too large for exact recursion");
  if (k > N) throw std::invalid_argument("chain_marginal: k > N");
  std::vector<double> cur(size_t(1) << N, 0.0), next;
  cur[0] = 1;
  for (size_t level = 0; level < k; ++level) {
    next.assign(cur.size(), 0.0);
    for (Mask m = 0; m < cur.size(); ++m) {
      if (cur[m] == 0) continue;
      std::vector<double> pmf = chain_step_distribution(law, m);
      for (size_t j = 0; j < N; ++j)
        if (pmf[j] > 0) next[m | (Mask(1) << j)] += cur[m] * pmf[j];
    }
    cur.swap(next);
  }
  return cur;
}

std::vector<double> conditioned_law(const ProductLaw& law, std::size_t k) {
  const size_t N = law.N();
  std::vector<double> out(size_t(1) << N, 0.0);
  double layer = layer_law(law)[k];
  for (Mask m = 0; m < out.size(); ++m)
    if (size_t(std::popcount(m)) == k) out[m] = law.prob(m) / layer;
  return out;
}

CombProbe combbound_probe(const SubsetFamily& f, const ProductLaw& law) {
  CombProbe c;
  for (Mask m : f.members) c.prob += law.prob(m);
  c.kappa = kappa_sperner_max(f).kappa;
  double b = law.beta();
  c.ratio = c.prob * c.kappa * std::sqrt(double(law.N())) * std::pow(b, 2.5) * std::pow(1 - b, -1.5);
  return c;
}

SubsetFamily random_family(int n, int size, bool antichain, std::uint64_t seed, std::uint64_t replica) {
  if (n < 1 || n > 24 || size < 0) throw std::invalid_argument("random_family: need 1 <= n <= 24");
  Stream rng(seed, 0x66616dULL, replica);
  std::vector<Mask> m;
  for (int tries = 0; tries < 40 * size + 40 && int(m.size()) < size; ++tries) {
    // layer near n/2, then a uniform subset of that size
    int k = std::clamp(int(std::lround(n / 2.0 + (rng.uniform() - 0.5) * std::max(2.0, n / 2.0))), 0, n);
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[std::size_t(i)] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    Mask a = 0;
    for (int i = 0; i < k; ++i) a |= Mask(1) << idx[std::size_t(i)];
    bool ok = std::find(m.begin(), m.end(), a) == m.end();
    if (ok && antichain)
      for (Mask b : m) ok = ok && (a & b) != a && (a & b) != b;
    if (ok) m.push_back(a);
  }
  return SubsetFamily(n, m);
}

ProductLaw random_law(int n, double beta, std::uint64_t seed, std::uint64_t replica) {
  if (!(beta > 0 && beta <= 0.5)) throw std::invalid_argument("random_law: beta outside (0, 1/2]");
  Stream rng(seed, 0x6c6177ULL, replica);
  std::vector<double> p(static_cast<std::size_t>(n));
  for (auto& v : p) v = rng.uniform(beta, 1 - beta);
  return ProductLaw(p);
}

}  // namespace rso
