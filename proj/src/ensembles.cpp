#include "rso/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <regex>
#include <stdexcept>

#include "rso/rng.hpp"

namespace rso {

SiteDistribution::SiteDistribution(std::vector<Atom> atoms, std::vector<Piece> pieces, double M, std::string name)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)), M_(M), name_(std::move(name)) {
  if (!(M_ > 0)) throw std::invalid_argument("distribution: M must be positive");
  double total = 0;
  for (const auto& a : atoms_) {
    if (!(a.mass >= 0) || a.loc < 0 || a.loc > M_) throw std::invalid_argument("distribution: atom outside [0,M] or negative mass");
    total += a.mass;
  }
  for (const auto& p : pieces_) {
    if (!(p.mass >= 0) || !(p.a < p.b) || p.a < 0 || p.b > M_)
      throw std::invalid_argument("distribution: piece outside [0,M] or malformed");
    total += p.mass;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("distribution: total mass differs from 1");
  // merge coincident atoms, drop massless entries
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) { return x.loc < y.loc; });
  std::vector<Atom> merged;
  for (const auto& a : atoms_) {
    if (a.mass == 0) continue;
    if (!merged.empty() && merged.back().loc == a.loc)
      merged.back().mass += a.mass;
    else
      merged.push_back(a);
  }
  atoms_ = std::move(merged);
  pieces_.erase(std::remove_if(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.mass == 0; }), pieces_.end());
  std::sort(pieces_.begin(), pieces_.end(), [](const Piece& x, const Piece& y) { return x.a < y.a || (x.a == y.a && x.b < y.b); });
  build();
}

void SiteDistribution::build() {
  bp_.clear();
  for (const auto& a : atoms_) bp_.push_back(a.loc);
  for (const auto& p : pieces_) bp_.push_back(p.a), bp_.push_back(p.b);
  std::sort(bp_.begin(), bp_.end());
  bp_.erase(std::unique(bp_.begin(), bp_.end()), bp_.end());
  F_at_.resize(bp_.size());
  F_left_.resize(bp_.size());
  for (size_t i = 0; i < bp_.size(); ++i) {
    F_at_[i] = cdf(bp_[i]);
    F_left_[i] = cdf_left(bp_[i]);
  }
}

SiteDistribution SiteDistribution::bernoulli(double p) {
  if (!(p > 0 && p < 1)) throw std::invalid_argument("bernoulli: p outside (0,1)");
  char buf[64];
  std::snprintf(buf, sizeof buf, "bernoulli(%g)", p);
  return SiteDistribution({{0.0, 1 - p}, {1.0, p}}, {}, 1.0, buf);
}

SiteDistribution SiteDistribution::uniform(double a, double b) {
  if (!(a >= 0 && a < b)) throw std::invalid_argument("uniform: need 0 <= a < b");
  char buf[64];
  std::snprintf(buf, sizeof buf, "uniform(%g,%g)", a, b);
  return SiteDistribution({}, {{a, b, 1.0}}, b, buf);
}

SiteDistribution SiteDistribution::point(double c) {
  if (!(c >= 0)) throw std::invalid_argument("point: location must be >= 0");
  char buf[64];
  std::snprintf(buf, sizeof buf, "point(%g)", c);
  return SiteDistribution({{c, 1.0}}, {}, std::max(c, 1.0), buf);
}

SiteDistribution SiteDistribution::atoms_only(std::vector<Atom> atoms, std::string name) {
  double M = 0;
  for (const auto& a : atoms) M = std::max(M, a.loc);
  return SiteDistribution(std::move(atoms), {}, std::max(M, 1e-300), std::move(name));
}

double SiteDistribution::cdf(double u) const {
  double s = 0;
  for (const auto& a : atoms_)
    if (a.loc <= u) s += a.mass;
  for (const auto& p : pieces_) {
    if (u >= p.b)
      s += p.mass;
    else if (u > p.a)
      s += p.mass * (u - p.a) / (p.b - p.a);
  }
  return std::min(s, 1.0);
}

double SiteDistribution::cdf_left(double u) const {
  double s = 0;
  for (const auto& a : atoms_)
    if (a.loc < u) s += a.mass;
  for (const auto& p : pieces_) {
    if (u >= p.b)
      s += p.mass;
    else if (u > p.a)
      s += p.mass * (u - p.a) / (p.b - p.a);
  }
  return std::min(s, 1.0);
}

double SiteDistribution::inverse_cdf(double t) const {
  if (!(t > 0 && t < 1)) throw std::invalid_argument("inverse_cdf: t outside (0,1)");
  for (size_t i = 0; i < bp_.size(); ++i) {
    if (t <= F_left_[i]) {
      // i > 0 here since F_left at the first breakpoint is 0
      double lo = bp_[i - 1], Flo = F_at_[i - 1];
      double r = (t - Flo) / (F_left_[i] - Flo);
      return lo + std::clamp(r, 0.0, 1.0) * (bp_[i] - lo);
    }
    if (t <= F_at_[i]) return bp_[i];
  }
  return bp_.back();
}

double SiteDistribution::mass_closed(double a, double b) const {
  if (b < a) return 0.0;
  return std::max(0.0, cdf(b) - cdf_left(a));
}

double SiteDistribution::mass_open(double a, double b) const {
  if (!(a < b)) return 0.0;
  return std::max(0.0, cdf_left(b) - cdf(a));
}

double SiteDistribution::mean() const {
  double m = 0;
  for (const auto& a : atoms_) m += a.mass * a.loc;
  for (const auto& p : pieces_) m += p.mass * 0.5 * (p.a + p.b);
  return m;
}

double SiteDistribution::variance() const {
  double m2 = 0, mu = mean();
  for (const auto& a : atoms_) m2 += a.mass * a.loc * a.loc;
  for (const auto& p : pieces_) m2 += p.mass * (p.a * p.a + p.a * p.b + p.b * p.b) / 3.0;
  return std::max(0.0, m2 - mu * mu);
}

nlohmann::json to_json(const SiteDistribution& d) {
  nlohmann::json atoms = nlohmann::json::array(), pieces = nlohmann::json::array();
  for (const auto& a : d.atoms()) atoms.push_back({a.loc, a.mass});
  for (const auto& p : d.pieces()) pieces.push_back({p.a, p.b, p.mass});
  return {{"name", d.name()}, {"M", d.M()}, {"atoms", atoms}, {"pieces", pieces}};
}

SiteDistribution distribution_from_json(const nlohmann::json& j) { return distribution_from_json(j, Registry{}); }

SiteDistribution distribution_from_json(const nlohmann::json& j, const Registry& reg) {
  if (j.is_string()) return resolve_distribution(reg, j.get<std::string>());
  if (!j.is_object()) throw std::invalid_argument("distribution: expected object or name");
  std::string type = j.value("type", "mixture");
  SiteDistribution d;
  if (type == "bernoulli") {
    d = SiteDistribution::bernoulli(j.value("p", 0.5));
  } else if (type == "uniform") {
    d = SiteDistribution::uniform(j.value("a", 0.0), j.value("b", 1.0));
  } else if (type == "point") {
    d = SiteDistribution::point(j.at("c").get<double>());
  } else if (type == "mixture") {
    std::vector<Atom> atoms;
    std::vector<Piece> pieces;
    double M = 0;
    for (const auto& a : j.value("atoms", nlohmann::json::array())) {
      atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
      M = std::max(M, atoms.back().loc);
    }
    for (const auto& p : j.value("pieces", nlohmann::json::array())) {
      pieces.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
      M = std::max(M, pieces.back().b);
    }
    d = SiteDistribution(std::move(atoms), std::move(pieces), j.value("M", std::max(M, 1.0)));
  } else {
    throw std::invalid_argument("distribution: unknown type '" + type + "'");
  }
  if (j.contains("name")) d.set_name(j["name"].get<std::string>());
  return d;
}

double anti_concentration(const SiteDistribution& d, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("anti_concentration: gamma must be positive");
  const double w = gamma / 2, M = d.M();
  std::vector<double> cand = {0.0, M};
  for (double b : d.breakpoints()) cand.push_back(b - w), cand.push_back(b + w), cand.push_back(b);
  double best = 0;
  for (double t : cand) {
    if (t < 0 || t > M) continue;
    best = std::max(best, d.mass_closed(t - w, t + w));
  }
  return std::clamp(1.0 - best, 0.0, 1.0);
}

namespace {

// sup over r of P[r-h < X < r+h]; the map is piecewise linear between the
// points where r +- h crosses a breakpoint, so endpoint limits suffice
double sup_open_window(const SiteDistribution& d, double h) {
  if (h <= 0) return 0.0;
  std::vector<double> c;
  for (double b : d.breakpoints()) c.push_back(b - h), c.push_back(b + h);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  auto f = [&](double r) { return d.mass_open(r - h, r + h); };
  double best = 0;
  for (size_t i = 0; i < c.size(); ++i) {
    best = std::max(best, f(c[i]));
    if (i + 1 < c.size()) {
      double a = c[i], b = c[i + 1], m1 = a + (b - a) / 3, m2 = a + 2 * (b - a) / 3;
      double f1 = f(m1), f2 = f(m2), slope = (f2 - f1) / (m2 - m1);
      best = std::max({best, f1 - slope * (m1 - a), f2 + slope * (b - m2)});
    }
  }
  return std::min(best, 1.0);
}

}  // namespace

VarianceBounds variance_ac_bounds(const SiteDistribution& d) {
  VarianceBounds v;
  v.var = d.variance();
  double s4 = v.var * v.var, M4 = std::pow(d.M(), 4);
  v.pz_bound = 9.0 / 16.0 * s4 / (s4 + M4);
  v.pz_actual = 1.0 - sup_open_window(d, std::sqrt(v.var) / 2);
  v.pz_holds = v.pz_actual >= v.pz_bound - 1e-12;
  return v;
}

double ac_implied_variance(const SiteDistribution& d, double gamma) {
  return anti_concentration(d, gamma) * gamma * gamma / 4.0;
}

const SiteDistribution& EnsembleSpec::at(Site p) const {
  auto pick = [&](int i) -> const SiteDistribution& {
    if (i < 0 || i >= int(palette.size())) throw std::invalid_argument("ensemble: site does not resolve to a palette entry");
    return palette[size_t(i)];
  };
  switch (rule) {
    case Rule::Iid: return pick(0);
    case Rule::Interface: return pick(p.x < boundary_column ? 0 : 1);
    case Rule::Periodic: {
      if (tile.empty() || tile[0].empty()) throw std::invalid_argument("ensemble: empty tile");
      int h = int(tile.size()), w = int(tile[0].size());
      const auto& row = tile[size_t(((p.y % h) + h) % h)];
      return pick(row.at(size_t(((p.x % w) + w) % w)));
    }
    case Rule::Custom: {
      auto it = custom.find(p);
      return pick(it == custom.end() ? custom_default : it->second);
    }
  }
  throw std::logic_error("ensemble: bad rule");
}

double EnsembleSpec::M() const {
  double m = 0;
  for (const auto& d : palette) m = std::max(m, d.M());
  return m;
}

EnsembleSpec EnsembleSpec::iid(SiteDistribution d) {
  EnsembleSpec e;
  e.rule = Rule::Iid;
  e.name = "iid:" + d.name();
  e.palette = {std::move(d)};
  return e;
}

EnsembleSpec EnsembleSpec::checkerboard() {
  EnsembleSpec e = periodic({SiteDistribution::bernoulli(0.5), SiteDistribution::uniform(0, 1)}, {{0, 1}, {1, 0}});
  e.name = "checkerboard";
  return e;
}

EnsembleSpec EnsembleSpec::interface(SiteDistribution left, SiteDistribution right, int column) {
  EnsembleSpec e;
  e.rule = Rule::Interface;
  e.name = "interface";
  e.palette = {std::move(left), std::move(right)};
  e.boundary_column = column;
  return e;
}

EnsembleSpec EnsembleSpec::periodic(std::vector<SiteDistribution> palette, std::vector<std::vector<int>> tile) {
  if (tile.empty() || tile[0].empty()) throw std::invalid_argument("periodic: empty tile");
  for (const auto& row : tile) {
    if (row.size() != tile[0].size()) throw std::invalid_argument("periodic: ragged tile");
    for (int i : row)
      if (i < 0 || i >= int(palette.size())) throw std::invalid_argument("periodic: tile index outside palette");
  }
  EnsembleSpec e;
  e.rule = Rule::Periodic;
  e.name = "periodic";
  e.palette = std::move(palette);
  e.tile = std::move(tile);
  return e;
}

Registry default_registry() {
  Registry r;
  auto add = [&](SiteDistribution d) { r.distributions[d.name()] = d; };
  add(SiteDistribution::bernoulli(0.5));
  add(SiteDistribution::uniform(0, 1));
  add(SiteDistribution({{0.0, 1.0 / 3}, {0.5, 1.0 / 3}, {1.0, 1.0 / 3}}, {}, 1.0, "three_atom"));
  add(SiteDistribution({{0.0, 0.5}}, {{0.0, 1.0, 0.5}}, 1.0, "half_atom_half_uniform"));
  add(SiteDistribution({{0.0, 0.25}, {2.0, 0.25}}, {{1.0, 4.0, 0.5}}, 4.0, "wide_mixture"));
  r.ensembles["iid_bernoulli"] = EnsembleSpec::iid(SiteDistribution::bernoulli(0.5));
  r.ensembles["iid_bernoulli"].name = "iid_bernoulli";
  r.ensembles["iid_uniform"] = EnsembleSpec::iid(SiteDistribution::uniform(0, 1));
  r.ensembles["iid_uniform"].name = "iid_uniform";
  r.ensembles["checkerboard"] = EnsembleSpec::checkerboard();
  r.ensembles["interface"] = EnsembleSpec::interface(SiteDistribution::bernoulli(0.5), SiteDistribution::uniform(0, 1), 0);
  return r;
}

SiteDistribution resolve_distribution(const Registry& reg, const std::string& name) {
  auto it = reg.distributions.find(name);
  if (it != reg.distributions.end()) return it->second;
  static const std::regex one(R"(^\s*(bernoulli|point)\(\s*([-+0-9.eE/]+)\s*\)\s*$)");
  static const std::regex two(R"(^\s*uniform\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\)\s*$)");
  auto num = [&](const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash != std::string::npos) return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
      return std::stod(s);
    } catch (const std::exception&) {
      throw std::invalid_argument("distribution: bad number in '" + name + "'");
    }
  };
  std::smatch m;
  if (std::regex_match(name, m, one))
    return m[1] == "bernoulli" ? SiteDistribution::bernoulli(num(m[2])) : SiteDistribution::point(num(m[2]));
  if (std::regex_match(name, m, two)) return SiteDistribution::uniform(num(m[1]), num(m[2]));
  throw std::invalid_argument("distribution: unknown name '" + name + "'");
}

nlohmann::json to_json(const EnsembleSpec& e) {
  nlohmann::json pal = nlohmann::json::array();
  for (const auto& d : e.palette) pal.push_back(to_json(d));
  nlohmann::json j = {{"name", e.name}, {"palette", pal}};
  switch (e.rule) {
    case EnsembleSpec::Rule::Iid: j["rule"] = "iid"; break;
    case EnsembleSpec::Rule::Periodic:
      j["rule"] = "periodic";
      j["tile"] = e.tile;
      break;
    case EnsembleSpec::Rule::Interface:
      j["rule"] = "interface";
      j["column"] = e.boundary_column;
      break;
    case EnsembleSpec::Rule::Custom: {
      j["rule"] = "custom";
      nlohmann::json s = nlohmann::json::array();
      for (const auto& [p, i] : e.custom) s.push_back({p.x, p.y, i});
      j["sites"] = s;
      j["default"] = e.custom_default;
      break;
    }
  }
  return j;
}

EnsembleSpec ensemble_from_json(const nlohmann::json& j, const Registry& reg) {
  if (j.is_string()) {
    auto it = reg.ensembles.find(j.get<std::string>());
    if (it != reg.ensembles.end()) return it->second;
    return EnsembleSpec::iid(resolve_distribution(reg, j.get<std::string>()));
  }
  std::string rule = j.at("rule").get<std::string>();
  auto palette = [&]() {
    std::vector<SiteDistribution> p;
    for (const auto& d : j.at("palette")) p.push_back(distribution_from_json(d, reg));
    return p;
  };
  EnsembleSpec e;
  if (rule == "iid") {
    e = EnsembleSpec::iid(distribution_from_json(j.contains("dist") ? j.at("dist") : j.at("palette").at(0), reg));
  } else if (rule == "checkerboard") {
    e = EnsembleSpec::checkerboard();
  } else if (rule == "periodic") {
    e = EnsembleSpec::periodic(palette(), j.at("tile").get<std::vector<std::vector<int>>>());
  } else if (rule == "interface") {
    e = EnsembleSpec::interface(distribution_from_json(j.at("left"), reg), distribution_from_json(j.at("right"), reg),
                                j.value("column", 0));
  } else if (rule == "custom") {
    e.rule = EnsembleSpec::Rule::Custom;
    e.palette = palette();
    for (const auto& s : j.value("sites", nlohmann::json::array()))
      e.custom[Site{s.at(0).get<int>(), s.at(1).get<int>()}] = s.at(2).get<int>();
    e.custom_default = j.value("default", -1);
    for (const auto& [p, i] : e.custom)
      if (i < 0 || i >= int(e.palette.size())) throw std::invalid_argument("custom ensemble: index outside palette");
  } else {
    throw std::invalid_argument("ensemble: unknown rule '" + rule + "'");
  }
  if (j.contains("name")) e.name = j["name"].get<std::string>();
  return e;
}

void load_palette(Registry& reg, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("palette: top level must be an object");
  const nlohmann::json dists = j.value("distributions", nlohmann::json::object());
  const nlohmann::json ens = j.value("ensembles", nlohmann::json::object());
  for (const auto& [name, d] : dists.items()) {
    try {
      SiteDistribution sd = distribution_from_json(d, reg);
      sd.set_name(name);
      reg.distributions[name] = sd;
    } catch (const std::exception& ex) {
      throw std::invalid_argument("palette entry '" + name + "': " + ex.what());
    }
  }
  for (const auto& [name, e] : ens.items()) {
    try {
      EnsembleSpec spec = ensemble_from_json(e, reg);
      spec.name = name;
      reg.ensembles[name] = spec;
    } catch (const std::exception& ex) {
      throw std::invalid_argument("palette entry '" + name + "': " + ex.what());
    }
  }
}

SiteSet FrozenAssignment::sites() const {
  SiteSet s;
  for (const auto& [p, v] : values) s.insert(p);
  return s;
}

PotentialField sample_potential(const EnsembleSpec& spec, const Square& box, const FrozenAssignment& frozen,
                                std::uint64_t seed, std::uint64_t replica) {
  const double M = spec.M();
  for (const auto& [p, v] : frozen.values)
    if (!(v >= 0 && v <= M)) throw std::invalid_argument("sample_potential: frozen value outside [0,M]");
  PotentialField f;
  f.box = box;
  f.seed = seed;
  f.replica = replica;
  f.v.resize(size_t(box.area()));
  for (int i = 0; i < int(box.area()); ++i) {
    Site p = box.site(i);
    auto it = frozen.values.find(p);
    f.v[size_t(i)] = it != frozen.values.end() ? it->second
                                               : spec.at(p).inverse_cdf(site_uniform(seed, p.x, p.y, replica));
  }
  return f;
}

std::string field_csv(const PotentialField& f, const std::string& manifest_line) {
  std::string out = "# " + manifest_line + "\nx,y,value\n";
  char buf[96];
  for (int i = 0; i < int(f.box.area()); ++i) {
    Site p = f.box.site(i);
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", p.x, p.y, f.v[size_t(i)]);
    out += buf;
  }
  return out;
}

}  // namespace rso
