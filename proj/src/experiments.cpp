#include "rso/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>

#include "rso/checkers.hpp"
#include "rso/decomposition.hpp"
#include "rso/io.hpp"
#include "rso/msa.hpp"
#include "rso/rng.hpp"
#include "rso/spectral.hpp"
#include "rso/sperner.hpp"
#include "rso/tilted.hpp"

namespace rso {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ConfigError(kExitInvalid, what); }

class Params {
 public:
  explicit Params(const json& j) : j_(j) {}
  template <class T>
  T get(const char* key, T def) const {
    if (!j_.contains(key)) return def;
    return as<T>(key);
  }
  template <class T>
  T need(const char* key) const {
    if (!j_.contains(key)) invalid(std::string("missing parameter '") + key + "'");
    return as<T>(key);
  }
  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const { return j_.at(key); }

 private:
  template <class T>
  T as(const char* key) const {
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      invalid(std::string("parameter '") + key + "' has the wrong type");
    }
  }
  const json& j_;
};

std::string num(long v) { return std::to_string(v); }

struct Ctx {
  const Params& p;
  Registry reg;
  std::uint64_t seed = 0;
  long trials = 0;
  std::string hash, manifest_line;
  std::map<std::string, std::string> files;  // name -> content

  void table(const std::string& name, const Table& t) { files[name] = t.text(manifest_line); }
  Table make(std::vector<std::string> header) const { return Table(hash, std::move(header)); }
  EnsembleSpec ensemble() const {
    try {
      if (!p.has("ensemble")) return reg.ensembles.at("iid_bernoulli");
      return ensemble_from_json(p.raw("ensemble"), reg);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      invalid(std::string("ensemble: ") + e.what());
    }
  }
};

void exp_decompose(Ctx& c) {
  SiteDistribution d = [&] {
    try {
      return c.p.has("distribution") ? distribution_from_json(c.p.raw("distribution"), c.reg)
                                     : resolve_distribution(c.reg, "bernoulli(0.5)");
    } catch (const std::exception& e) {
      invalid(std::string("distribution: ") + e.what());
    }
  }();
  BernoulliDecomposition dec = decompose(d, c.p.get("gamma", 0.25), c.p.get("rho", 0.5));
  json out = to_json(dec);
  out["distribution"] = to_json(d);
  out["verify_deviation"] = verify_distribution(d, dec);
  c.files["decomposition.json"] = out.dump(2) + "\n";
}

void exp_sperner(Ctx& c) {
  const int N = c.p.get("N", 10);
  const double beta = c.p.get("beta", 0.2);
  const int size = c.p.get("family_size", 12);
  const bool anti = c.p.get("antichain", false);
  if (N < 1 || N > 20) invalid("sperner: N must be in [1, 20]");
  Table t = c.make({"trial", "N", "beta", "members", "kappa", "classical", "weighted", "weighted_bound", "holds"});
  for (long i = 0; i < c.trials; ++i) {
    ProductLaw law = random_law(N, beta, c.seed, std::uint64_t(i));
    SubsetFamily f = random_family(N, size, anti, c.seed, std::uint64_t(i));
    LymSums s = lym_sums(f, law);
    bool holds = s.kappa == 0 || s.weighted <= s.weighted_bound * (1 + 1e-12);
    t.add({num(i), num(N), fmt(s.beta), num(long(f.members.size())), fmt(s.kappa), fmt(s.classical), fmt(s.weighted),
           fmt(s.weighted_bound), holds ? "1" : "0"});
  }
  c.table("sperner.csv", t);
}

void exp_chain(Ctx& c) {
  const int N = c.p.get("N", 6);
  if (N < 1 || N > 12) invalid("chain: N must be in [1, 12]");
  ProductLaw law = random_law(N, c.p.get("beta", 0.2), c.seed, 0);
  std::vector<std::vector<double>> freq(std::size_t(N + 1), std::vector<double>(std::size_t(1) << N, 0.0));
  for (long i = 0; i < c.trials; ++i) {
    auto ch = sample_chain(law, c.seed, std::uint64_t(i));
    for (std::size_t k = 0; k < ch.size(); ++k) freq[k][ch[k]] += 1.0 / double(c.trials);
  }
  Table t = c.make({"k", "tv_exact_conditioned", "max_abs_dev_sampled", "max_z_sampled"});
  for (int k = 0; k <= N; ++k) {
    auto ex = chain_marginal(law, std::size_t(k)), co = conditioned_law(law, std::size_t(k));
    double tv = 0, dev = 0, z = 0;
    for (std::size_t m = 0; m < ex.size(); ++m) {
      tv += 0.5 * std::abs(ex[m] - co[m]);
      double d = std::abs(freq[std::size_t(k)][m] - ex[m]);
      dev = std::max(dev, d);
      double se = std::sqrt(ex[m] * (1 - ex[m]) / double(c.trials));
      if (se > 0) z = std::max(z, d / se);
    }
    t.add({num(k), fmt(tv), fmt(dev), fmt(z)});
  }
  c.table("chain.csv", t);
}

void exp_spectrum(Ctx& c) {
  const int side = c.p.get("side", 8);
  if (side < 1 || side > 32) invalid("spectrum: side must be in [1, 32]");
  EnsembleSpec spec = c.ensemble();
  Square box{{0, 0}, side};
  Table t = c.make({"trial", "index", "eigenvalue"});
  Table s = c.make({"trial", "lambda_min", "max_residual", "max_orth_dev"});
  for (long i = 0; i < c.trials; ++i) {
    SpectralData sd = eigensolve(assemble(box, sample_potential(spec, box, {}, c.seed, std::uint64_t(i))));
    for (int e = 0; e < int(sd.values.size()); ++e) t.add({num(i), num(e), fmt(sd.values(e))});
    s.add({num(i), fmt(sd.values(0)), fmt(sd.max_residual), fmt(sd.max_orth_dev)});
  }
  c.table("spectrum.csv", t);
  c.table("spectrum_summary.csv", s);
}

std::vector<int> sides_param(const Params& p, std::vector<int> def) {
  auto v = p.get("sides", def);
  for (int s : v)
    if (s < 2 || s > 64) invalid("sides must lie in [2, 64]");
  if (v.empty()) invalid("sides must be non-empty");
  return v;
}

void exp_wegner(Ctx& c) {
  EnsembleSpec spec = c.ensemble();
  const double Ebar = c.p.get("Ebar", 0.05), ex = c.p.get("L1_exponent", 0.9);
  Table t = c.make({"side", "L1", "Ebar", "trials", "hits", "p_hat", "ci_lo", "ci_hi"});
  for (int L : sides_param(c.p, {8, 16, 32})) {
    double L1 = std::pow(double(L), ex);
    McEstimate m = wegner_mc(spec, Square{{0, 0}, L}, Ebar, L1, {}, c.trials, key_combine(c.seed, std::uint64_t(L)));
    t.add({num(L), fmt(L1), fmt(Ebar), num(m.trials), num(m.hits), fmt(m.p_hat), fmt(m.ci.lo), fmt(m.ci.hi)});
  }
  c.table("wegner.csv", t);
}

void exp_lifshitz(Ctx& c) {
  EnsembleSpec spec = c.ensemble();
  const double e = c.p.get("e", 0.05);
  Table t = c.make({"side", "e", "dirichlet_floor", "trials", "hits", "p_hat", "ci_lo", "ci_hi"});
  for (int L : sides_param(c.p, {8, 12, 16, 24})) {
    McEstimate m = low_spectrum_probability(spec, L, e, c.trials, c.seed);
    double s = std::sin(std::numbers::pi / (2.0 * (L + 1)));
    t.add({num(L), fmt(e), fmt(8 * s * s), num(m.trials), num(m.hits), fmt(m.p_hat), fmt(m.ci.lo), fmt(m.ci.hi)});
  }
  c.table("lifshitz.csv", t);
}

void exp_uc(Ctx& c) {
  EnsembleSpec spec = c.ensemble();
  const int side = c.p.get("side", 16);
  UcParams u;
  u.Ebar = c.p.get("Ebar", 0.05);
  u.alpha = c.p.get("alpha", 1.0);
  u.eps = c.p.get("eps", 0.1);
  u.trials = c.trials;
  UcEstimate est = uc_event_mc(spec, Square{{0, 0}, side}, u, {}, c.seed);
  Table t = c.make({"side", "Ebar", "alpha", "eps", "trials", "hits", "vacuous", "frequency", "ci_lo", "ci_hi", "worst_log_ratio"});
  t.add({num(side), fmt(u.Ebar), fmt(u.alpha), fmt(u.eps), num(est.trials), num(est.hits), num(est.vacuous),
         fmt(est.frequency), fmt(est.ci.lo), fmt(est.ci.hi), fmt(est.worst_log_ratio)});
  c.table("uc.csv", t);
}

void exp_ni(Ctx& c) {
  EnsembleSpec spec = c.ensemble();
  const int a = c.p.get("a", 48), b = c.p.get("b", 4);
  NiParams n;
  n.Ebar = c.p.get("Ebar", 0.0);
  n.alpha = c.p.get("alpha", 0.5);
  n.eps = c.p.get("eps", 0.01);
  n.threshold_exponent = c.p.get("threshold_exponent", 0.5);
  n.boundary_samples = c.p.get("boundary_samples", 4);
  n.relaxed = c.p.get("relaxed", false);
  n.trials = c.trials;
  if (a < 3 || b < 3) invalid("ni: need a, b >= 3");
  EventEstimate est = ni_event_mc(spec, tilted_rect(1, a, 1, b), n, {}, c.seed);
  Table t = c.make({"a", "b", "alpha", "eps", "trials", "hits", "frequency", "ci_lo", "ci_hi"});
  t.add({num(a), num(b), fmt(n.alpha), fmt(n.eps), num(est.trials), num(est.hits), fmt(est.frequency), fmt(est.ci.lo),
         fmt(est.ci.hi)});
  c.table("ni.csv", t);
}

void exp_msa(Ctx& c) {
  EnsembleSpec spec = c.ensemble();
  DeskMsaConfig m;
  m.domain = c.p.get("domain", m.domain);
  m.scales = c.p.get("scales", m.scales);
  m.M_tilde = c.p.get("M_tilde", m.M_tilde);
  m.N = c.p.get("N", m.N);
  m.cover_alpha = c.p.get("cover_alpha", m.cover_alpha);
  m.eps = c.p.get("eps", m.eps);
  m.nu = c.p.get("nu", m.nu);
  m.delta = c.p.get("delta", m.delta);
  m.C_eta = c.p.get("C_eta", m.C_eta);
  m.thin = c.p.get("thin", m.thin);
  m.Ebar_max = c.p.get("Ebar_max", m.Ebar_max);
  m.n_energies = c.p.get("n_energies", m.n_energies);
  m.trials = c.trials;
  if (m.domain < 2 || m.domain > 64) invalid("msa: domain must be in [2, 64]");
  DeskMsaResult r = run_desk_msa(m, spec, c.seed);
  Table t = c.make({"k", "side", "squares", "bad", "ready", "not_ready", "max_hereditary", "frozen", "added", "growth_bound",
                    "growth_ok", "eta", "regularity_ok", "m"});
  for (const auto& w : r.rows)
    t.add({num(w.k), num(w.side), num(w.squares), num(w.bad), num(w.ready), num(w.not_ready), num(w.max_hereditary),
           num(w.frozen), num(w.added), num(w.growth_bound), w.growth_ok ? "1" : "0", fmt(w.eta),
           w.regularity_ok ? "1" : "0", fmt(w.m)});
  c.table("msa.csv", t);
  Table s = c.make({"x", "y", "side", "good", "ready", "hereditary_chains", "hereditary_distinct", "trials_used", "worst_log_margin"});
  for (const auto& b : r.classes)
    s.add({num(b.square.x0()), num(b.square.y0()), num(b.square.side), b.good ? "1" : "0", b.ready ? "1" : "0",
           num(b.hereditary_chains), num(b.hereditary_distinct), num(b.trials_used), fmt(b.worst_log_margin)});
  c.table("msa_squares.csv", s);
  if (c.p.has("schedule")) {
    Params sp(c.p.raw("schedule"));
    ScaleSchedule sch = build_schedule(sp.need<double>("eps"), sp.need<double>("nu"), sp.need<double>("delta"),
                                       sp.need<long>("L0"), sp.get("depth", 6), sp.get("C_eta", 1.0));
    c.files["schedule.json"] = to_json(sch).dump(2) + "\n";
  }
}

void exp_lemma_check(Ctx& c) {
  Table t = c.make({"lemma", "generated", "applicable", "violations", "worst"});
  std::string which = c.p.get<std::string>("lemma", "all");
  auto want = [&](const char* name) { return c.p.get(name, c.trials); };
  bool any = false;
  auto emit = [&](const SuiteTally& s) {
    any = true;
    t.add({s.lemma, num(s.generated), num(s.applicable), num(s.violations), fmt(s.worst)});
  };
  if (which == "all" || which == "eigenvar") emit(eigenvar_suite(want("eigenvar"), key_combine(c.seed, 1)));
  if (which == "all" || which == "taobound") emit(taobound_suite(want("taobound"), key_combine(c.seed, 2)));
  if (which == "all" || which == "contres") emit(contres_suite(want("contres"), key_combine(c.seed, 3)));
  if (which == "all" || which == "detmsa") emit(detmsa_suite(want("detmsa"), key_combine(c.seed, 4)));
  if (!any) invalid("lemma-check: unknown lemma '" + which + "'");
  c.table("lemma_check.csv", t);
}

using Runner = void (*)(Ctx&);
const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> m = {
      {"decompose", exp_decompose}, {"sperner", exp_sperner}, {"chain", exp_chain},       {"spectrum", exp_spectrum},
      {"wegner", exp_wegner},       {"uc", exp_uc},           {"ni", exp_ni},             {"msa", exp_msa},
      {"lifshitz", exp_lifshitz},   {"lemma-check", exp_lemma_check}};
  return m;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k = {"decompose", "sperner", "chain", "spectrum", "wegner",
                                             "uc",        "ni",      "msa",   "lifshitz", "lemma-check"};
  return k;
}

RunResult run_config(const json& cfg, const std::string& output_dir_override) {
  RunResult res;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (!cfg.is_object()) invalid("config must be a JSON object");
    Params p(cfg);
    const std::string kind = p.need<std::string>("experiment");
    auto it = runners().find(kind);
    if (it == runners().end()) throw ConfigError(kExitUnknown, "unknown experiment '" + kind + "'");
    Ctx c{p, default_registry(), 0, 0, "", "", {}};
    c.seed = p.need<std::uint64_t>("seed");
    c.trials = p.need<long>("trials");
    if (c.trials < 1) invalid("trials must be positive");
    if (p.has("palette")) {
      try {
        load_palette(c.reg, p.raw("palette"));
      } catch (const std::exception& e) {
        invalid(std::string("palette: ") + e.what());
      }
    }
    res.output_dir = !output_dir_override.empty() ? output_dir_override : p.get<std::string>("output_dir", "out");
    c.hash = config_hash(cfg);
    c.manifest_line = std::string("rsolab ") + kArtifactVersion + " experiment=" + kind + " config=" + c.hash +
                      " seed=" + std::to_string(c.seed);
    try {
      ensure_writable_dir(res.output_dir);
    } catch (const OutputError& e) {
      throw ConfigError(kExitOutput, e.what());
    }
    try {
      it->second(c);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      invalid(e.what());
    }
    json manifest = {{"config_hash", c.hash}, {"artifact_version", kArtifactVersion}, {"experiment", kind},
                     {"seed", c.seed},        {"trials", c.trials},                   {"params", cfg}};
    try {
      for (const auto& [name, content] : c.files) {
        write_text(res.output_dir, name, content);
        res.outputs.push_back(name);
      }
      manifest["outputs"] = res.outputs;
      manifest["wall_clock_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_text(res.output_dir, "manifest.json", manifest.dump(2) + "\n");
    } catch (const OutputError& e) {
      throw ConfigError(kExitOutput, e.what());
    }
    res.message = "wrote " + std::to_string(res.outputs.size()) + " data file(s) to " + res.output_dir;
  } catch (const ConfigError& e) {
    res.exit_code = e.code();
    res.message = e.what();
  }
  return res;
}

RunResult run_config_file(const std::string& path) {
  json cfg;
  try {
    std::ifstream f(path);
    if (!f) throw ConfigError(kExitInvalid, "cannot read config " + path);
    cfg = json::parse(f);
  } catch (const ConfigError& e) {
    return RunResult{e.code(), e.what(), "", {}};
  } catch (const json::exception& e) {
    return RunResult{kExitInvalid, std::string("config does not parse: ") + e.what(), "", {}};
  }
  const char* env = std::getenv("RSO_OUTPUT_DIR");
  return run_config(cfg, env ? env : "");
}

json list_registry(const Registry& reg) {
  json d = json::array(), e = json::array();
  for (const auto& [name, dist] : reg.distributions) d.push_back({{"name", name}, {"law", to_json(dist)}});
  for (const auto& [name, ens] : reg.ensembles) e.push_back({{"name", name}, {"spec", to_json(ens)}});
  json forms = json::array({"bernoulli(p)", "uniform(a,b)", "point(c)"});
  return {{"distributions", d}, {"ensembles", e}, {"parametric", forms}};
}

Registry registry_with_palette(const std::string& palette_path) {
  Registry reg = default_registry();
  if (palette_path.empty()) return reg;
  try {
    std::ifstream f(palette_path);
    if (!f) throw std::runtime_error("cannot read " + palette_path);
    load_palette(reg, json::parse(f));
  } catch (const std::exception& e) {
    throw ConfigError(kExitInvalid, std::string("palette: ") + e.what());
  }
  return reg;
}

namespace {

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) invalid("matrix must be a non-empty array of rows");
  const int r = int(j.size()), c = int(j[0].size());
  Eigen::MatrixXd M(r, c);
  for (int i = 0; i < r; ++i) {
    if (int(j[std::size_t(i)].size()) != c) invalid("matrix rows differ in length");
    for (int k = 0; k < c; ++k) M(i, k) = j[std::size_t(i)][std::size_t(k)].get<double>();
  }
  return M;
}

}  // namespace

CheckResult check_instance(const std::string& lemma, const json& inst) {
  CheckResult out;
  try {
    Params p(inst);
    if (lemma == "eigenvar") {
      PushInstance pi;
      pi.A = matrix_from_json(p.raw("A"));
      if (pi.A.rows() != pi.A.cols() || !pi.A.isApprox(pi.A.transpose())) invalid("A must be symmetric");
      pi.k = p.need<int>("k");
      auto r = p.need<std::vector<double>>("r");
      if (r.size() != 5) invalid("r must have five entries");
      std::copy(r.begin(), r.end(), pi.r.begin());
      pi.i = p.need<int>("i");
      pi.j = p.need<int>("j");
      PushResult pr = eigenvalue_push_check(pi, p.get("c", 1.0 / 16));
      out.report = {{"lemma", lemma}, {"verdict", to_string(pr.verdict)}, {"failed_premise", pr.failed_premise},
                    {"count_before", pr.count_before}, {"count_after", pr.count_after}};
      if (pr.verdict == Verdict::Violated) out.exit_code = kExitViolation;
    } else if (lemma == "taobound") {
      Eigen::MatrixXd V = matrix_from_json(p.raw("vectors")).transpose();  // rows of the file are vectors
      OrthogonalityResult o = almost_orthogonal_count(V);
      out.report = {{"lemma", lemma}, {"verdict", to_string(o.verdict)}, {"m", o.m}, {"n", o.n},
                    {"max_deviation", o.max_deviation}, {"bound", o.bound}};
      if (o.verdict == Verdict::Violated) out.exit_code = kExitViolation;
    } else if (lemma == "contres") {
      const int side = p.need<int>("side");
      auto V = p.need<std::vector<double>>("V");
      if (side < 1 || long(V.size()) != long(side) * side) invalid("V must have side^2 entries");
      Hamiltonian h = assemble(Square{{0, 0}, side}, V);
      EnergyWindowResult e = energy_window_check(h, p.need<double>("Ebar"), p.need<double>("alpha"), p.need<double>("beta"),
                                                 p.get("energies", 9), p.get<std::uint64_t>("seed", 0));
      out.report = {{"lemma", lemma}, {"verdict", to_string(e.verdict)}, {"window", e.window},
                    {"worst_ratio", e.worst_ratio}, {"energies", e.energies}};
      if (e.verdict == Verdict::Violated) out.exit_code = kExitViolation;
    } else if (lemma == "detmsa") {
      DetMsaInstance d;
      d.sc.L0 = p.need<int>("L0");
      d.sc.L1 = p.get("L1", d.sc.L1), d.sc.L2 = p.get("L2", d.sc.L2), d.sc.L3 = p.get("L3", d.sc.L3);
      d.sc.L4 = p.get("L4", d.sc.L4), d.sc.L5 = p.get("L5", d.sc.L5), d.sc.L6 = p.get("L6", d.sc.L6);
      d.sc.m = p.get("m", d.sc.m), d.sc.nu = p.get("nu", d.sc.nu);
      d.box = Square{{0, 0}, d.sc.L0};
      d.V = p.need<std::vector<double>>("V");
      d.E = p.need<double>("E");
      if (p.has("defects"))
        for (const auto& q : p.raw("defects")) d.defects.push_back(square_from_json(q));
      DetMsaResult r = deterministic_propagation(d);
      out.report = {{"lemma", lemma},
                    {"verdict", !r.applicable ? "inapplicable" : (r.holds ? "holds" : "violated")},
                    {"gate", r.gate},
                    {"worst_margin", r.worst_margin},
                    {"empirical_m", r.empirical_m}};
      if (r.applicable && !r.holds) out.exit_code = kExitViolation;
    } else {
      throw ConfigError(kExitUnknown, "unknown lemma '" + lemma + "'");
    }
  } catch (const ConfigError& e) {
    out.exit_code = e.code();
    out.report = {{"error", e.what()}};
  } catch (const std::exception& e) {
    out.exit_code = kExitInvalid;
    out.report = {{"error", e.what()}};
  }
  return out;
}

SuiteTally eigenvar_suite(long want, std::uint64_t seed) {
  SuiteTally s{"eigenvar"};
  s.worst = -INFINITY;
  for (long r = 0; s.applicable < want && s.generated < 20 * want; ++r) {
    ++s.generated;
    PushInstance inst = random_push_instance(seed, std::uint64_t(r), 16);
    PushResult pr = eigenvalue_push_check(inst);
    if (pr.verdict == Verdict::Inapplicable) continue;
    ++s.applicable;
    s.violations += pr.verdict == Verdict::Violated;
    s.worst = std::max(s.worst, double(pr.count_before - pr.count_after));  // <= -1 when the count rises
  }
  return s;
}

SuiteTally taobound_suite(long want, std::uint64_t seed) {
  SuiteTally s{"taobound"};
  s.worst = -INFINITY;
  for (long r = 0; s.applicable < want && s.generated < 20 * want; ++r) {
    ++s.generated;
    Stream rng(seed, 0x74616fULL, std::uint64_t(r));
    const int n = 2 + int(rng.below(15));
    const int m = 1 + int(rng.below(std::uint64_t(n + 2)));
    Eigen::MatrixXd G(n, std::max(n, m));
    for (int a = 0; a < G.rows(); ++a)
      for (int b = 0; b < G.cols(); ++b) G(a, b) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd V(n, m);
    const double tol = 1.0 / std::sqrt(5.0 * n);
    for (int b = 0; b < m; ++b) {
      V.col(b) = b < n ? Eigen::VectorXd(Q.col(b)) : Eigen::VectorXd(G.col(b).normalized());
      for (int a = 0; a < n; ++a) V(a, b) += rng.uniform(-1, 1) * tol / (2.0 * n);
    }
    OrthogonalityResult o = almost_orthogonal_count(V);
    if (o.verdict == Verdict::Inapplicable) continue;
    ++s.applicable;
    s.violations += o.verdict == Verdict::Violated;
    s.worst = std::max(s.worst, double(o.m) - o.bound);
  }
  return s;
}

SuiteTally contres_suite(long want, std::uint64_t seed) {
  SuiteTally s{"contres"};
  for (long r = 0; s.applicable < want && s.generated < 20 * want; ++r) {
    ++s.generated;
    Stream rng(seed, 0x636f6eULL, std::uint64_t(r));
    const int side = 2 + int(rng.below(3));
    std::vector<double> V(std::size_t(side * side));
    for (auto& v : V) v = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0, 4);
    Hamiltonian h = assemble(Square{{0, 0}, side}, V);
    const double Ebar = rng.uniform(0, 8);
    const double beta = rng.uniform(0.05, 1.0);
    double alpha;
    try {
      alpha = minimal_alpha(h, Ebar, beta) + rng.uniform(0, 0.5);
    } catch (const ResonanceError&) {
      continue;
    }
    if (!(alpha > beta)) alpha = beta + 0.1;
    EnergyWindowResult e = energy_window_check(h, Ebar, alpha, beta, 9, std::uint64_t(r));
    if (e.verdict == Verdict::Inapplicable) continue;
    ++s.applicable;
    s.violations += e.verdict == Verdict::Violated;
    s.worst = std::max(s.worst, e.worst_ratio);
  }
  return s;
}

SuiteTally detmsa_suite(long want, std::uint64_t seed) {
  SuiteTally s{"detmsa"};
  s.worst = -INFINITY;
  for (long r = 0; s.applicable < want && s.generated < 20 * want; ++r) {
    ++s.generated;
    DetMsaResult d = deterministic_propagation(random_detmsa_instance(seed, std::uint64_t(r), 32));
    if (!d.applicable) continue;
    ++s.applicable;
    s.violations += !d.holds;
    s.worst = std::max(s.worst, d.worst_margin);
  }
  return s;
}

}  // namespace rso
