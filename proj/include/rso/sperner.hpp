#pragma once
// Product measures on {0,1}^N, layer laws, kappa-Sperner families, LYM sums
// and the maximal-chain sampler whose k-th set is xi conditioned on |xi| = k.
#include <cstdint>
#include <vector>

#include "json.hpp"

namespace rso {

using Mask = std::uint32_t;

struct ProductLaw {
  std::vector<double> p;
  explicit ProductLaw(std::vector<double> probs);
  std::size_t N() const { return p.size(); }
  double beta() const;  // min_k min(p_k, 1 - p_k)
  double prob(Mask eta) const;
};

// pmf of |xi|, Poisson-binomial by the binomial_step kernel
std::vector<double> layer_law(const ProductLaw& law);

// k-th elementary symmetric polynomial of q
double elementary_symmetric(const std::vector<double>& q, std::size_t k);

struct SubsetFamily {
  int n = 0;
  std::vector<Mask> members;  // sorted, distinct
  SubsetFamily() = default;
  SubsetFamily(int n, std::vector<Mask> m);
  bool is_antichain() const;
};

nlohmann::json to_json(const SubsetFamily& f);  // sorted hex bitmasks
SubsetFamily family_from_json(const nlohmann::json& j);

struct KappaResult {
  double kappa = 1;
  std::vector<Mask> witness;  // B_max per member, same order as members
};
KappaResult kappa_sperner_max(const SubsetFamily& f);

struct LymSums {
  double classical = 0, weighted = 0;
  double kappa = 1, beta = 0;
  double classical_bound = 0;  // 1/kappa
  double weighted_bound = 0;   // (1-beta)^2 / (beta^2 kappa)
};
LymSums lym_sums(const SubsetFamily& f, const ProductLaw& law);

// pmf over j of the next element added to psi; zero on psi
std::vector<double> chain_step_distribution(const ProductLaw& law, Mask psi);
// unnormalized weights q_j h_{psi,j}
std::vector<double> chain_step_weights(const ProductLaw& law, Mask psi);

std::vector<Mask> sample_chain(const ProductLaw& law, std::uint64_t seed, std::uint64_t replica = 0);
// probability of each mask as the k-th chain set (vector of size 2^N)
std::vector<double> chain_marginal(const ProductLaw& law, std::size_t k);
// P[xi = eta | |xi| = k] as a vector of size 2^N
std::vector<double> conditioned_law(const ProductLaw& law, std::size_t k);

struct CombProbe {
  double prob = 0, kappa = 0, ratio = 0;
};
CombProbe combbound_probe(const SubsetFamily& f, const ProductLaw& law);

// random family on [n] of up to `size` members drawn near the middle layers;
// antichain=true rejects comparable draws
SubsetFamily random_family(int n, int size, bool antichain, std::uint64_t seed, std::uint64_t replica);
// p_k uniform on [beta, 1 - beta]
ProductLaw random_law(int n, double beta, std::uint64_t seed, std::uint64_t replica);

}  // namespace rso
