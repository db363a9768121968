#pragma once
// Bounded site laws as atoms plus uniform pieces, non-stationary ensembles
// built from a palette of such laws, and keyed potential sampling.
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rso/geometry.hpp"

namespace rso {

struct Atom {
  double loc = 0, mass = 0;
};

// uniform law on [a,b] carrying total mass `mass`
struct Piece {
  double a = 0, b = 1, mass = 0;
};

class SiteDistribution {
 public:
  SiteDistribution() = default;
  SiteDistribution(std::vector<Atom> atoms, std::vector<Piece> pieces, double M, std::string name = "");

  static SiteDistribution bernoulli(double p);  // (1-p) delta_0 + p delta_1
  static SiteDistribution uniform(double a, double b);
  static SiteDistribution point(double c);
  static SiteDistribution atoms_only(std::vector<Atom> atoms, std::string name = "");

  double cdf(double u) const;       // P[X <= u]
  double cdf_left(double u) const;  // P[X < u]
  // G(t) = inf{u : P[X <= u] >= t}
  double inverse_cdf(double t) const;
  double mass_closed(double a, double b) const;  // P[a <= X <= b]
  double mass_open(double a, double b) const;    // P[a < X < b]
  double mean() const;
  double variance() const;

  // atom locations and piece endpoints, sorted, unique
  const std::vector<double>& breakpoints() const { return bp_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  double M() const { return M_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

 private:
  void build();
  std::vector<Atom> atoms_;
  std::vector<Piece> pieces_;
  double M_ = 1;
  std::string name_;
  std::vector<double> bp_, F_at_, F_left_;
};

nlohmann::json to_json(const SiteDistribution& d);
// {"type": "bernoulli"|"uniform"|"point"|"mixture", ...}; throws std::invalid_argument
SiteDistribution distribution_from_json(const nlohmann::json& j);

// inf over t in [0,M] of P[|X - t| > gamma/2]
double anti_concentration(const SiteDistribution& d, double gamma);

struct VarianceBounds {
  double var = 0;
  double pz_bound = 0;   // (9/16) s^4 / (s^4 + M^4)
  double pz_actual = 0;  // min over r of P[|X - r| >= s/2]
  bool pz_holds = false;
};
VarianceBounds variance_ac_bounds(const SiteDistribution& d);
// rho*(gamma) gamma^2 / 4, the variance floor implied by anti-concentration
double ac_implied_variance(const SiteDistribution& d, double gamma);

struct EnsembleSpec {
  enum class Rule { Iid, Periodic, Interface, Custom };
  Rule rule = Rule::Iid;
  std::string name;
  std::vector<SiteDistribution> palette;
  std::vector<std::vector<int>> tile;  // periodic: tile[y mod h][x mod w]
  int boundary_column = 0;             // interface: x < column -> palette[0], else palette[1]
  std::map<Site, int> custom;          // custom: explicit map, custom_default elsewhere
  int custom_default = -1;

  const SiteDistribution& at(Site p) const;
  double M() const;

  static EnsembleSpec iid(SiteDistribution d);
  // even x+y -> Bernoulli(1/2), odd -> Uniform[0,1]
  static EnsembleSpec checkerboard();
  static EnsembleSpec interface(SiteDistribution left, SiteDistribution right, int column);
  static EnsembleSpec periodic(std::vector<SiteDistribution> palette, std::vector<std::vector<int>> tile);
};

struct Registry {
  std::map<std::string, SiteDistribution> distributions;
  std::map<std::string, EnsembleSpec> ensembles;
};
Registry default_registry();

// registry name, or one of bernoulli(p), uniform(a,b), point(c)
SiteDistribution resolve_distribution(const Registry& reg, const std::string& name);
SiteDistribution distribution_from_json(const nlohmann::json& j, const Registry& reg);

nlohmann::json to_json(const EnsembleSpec& e);
// registry name, or {"rule": "iid"|"periodic"|"interface"|"custom"|"checkerboard", ...}
EnsembleSpec ensemble_from_json(const nlohmann::json& j, const Registry& reg);
// adds {"distributions": {name: dist...}, "ensembles": {name: spec...}}; throws naming the bad entry
void load_palette(Registry& reg, const nlohmann::json& j);

struct FrozenAssignment {
  std::map<Site, double> values;
  SiteSet sites() const;
  bool contains(Site p) const { return values.count(p) != 0; }
};

struct PotentialField {
  Square box;
  std::vector<double> v;  // row-major over box
  std::uint64_t seed = 0, replica = 0;
  double at(Site p) const { return v[std::size_t(box.index(p))]; }
  double& at(Site p) { return v[std::size_t(box.index(p))]; }
};

PotentialField sample_potential(const EnsembleSpec& spec, const Square& box, const FrozenAssignment& frozen,
                                std::uint64_t seed, std::uint64_t replica);

// x,y,value rows after a '#' provenance line
std::string field_csv(const PotentialField& f, const std::string& manifest_line);

}  // namespace rso
