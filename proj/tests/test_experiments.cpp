#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rso/experiments.hpp"
#include "rso/io.hpp"

using namespace rso;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("rsolab_test_" + name);
  fs::remove_all(d);
  return d;
}
}  // namespace

TEST_CASE("reruns are byte-identical") {
  const std::vector<json> cfgs = {
      {{"experiment", "decompose"}, {"seed", 1}, {"trials", 1}, {"distribution", "uniform(0,1)"}, {"gamma", 0.25}},
      {{"experiment", "sperner"}, {"seed", 2}, {"trials", 20}, {"N", 8}},
      {{"experiment", "chain"}, {"seed", 3}, {"trials", 500}, {"N", 6}},
      {{"experiment", "spectrum"}, {"seed", 4}, {"trials", 3}, {"side", 6}},
      {{"experiment", "wegner"}, {"seed", 5}, {"trials", 20}, {"sides", {4, 6}}},
      {{"experiment", "lifshitz"}, {"seed", 6}, {"trials", 20}, {"sides", {4, 6}}},
      {{"experiment", "ni"}, {"seed", 7}, {"trials", 10}},
      {{"experiment", "uc"}, {"seed", 8}, {"trials", 5}, {"side", 8}},
      {{"experiment", "msa"}, {"seed", 9}, {"trials", 2}, {"domain", 16}, {"scales", {2, 4, 8}}},
      {{"experiment", "lemma-check"}, {"seed", 10}, {"trials", 5}},
  };
  for (const auto& cfg : cfgs) {
    const std::string kind = cfg["experiment"];
    CAPTURE(kind);
    fs::path a = scratch(kind + "_a"), b = scratch(kind + "_b");
    RunResult ra = run_config(cfg, a.string()), rb = run_config(cfg, b.string());
    REQUIRE(ra.exit_code == 0);
    REQUIRE(rb.exit_code == 0);
    REQUIRE_FALSE(ra.outputs.empty());
    CHECK(ra.outputs == rb.outputs);
    for (const auto& f : ra.outputs) CHECK(slurp(a / f) == slurp(b / f));
    json m = json::parse(slurp(a / "manifest.json"));
    CHECK(m["config_hash"] == config_hash(cfg));
    CHECK(m["artifact_version"] == kArtifactVersion);
    CHECK(m["outputs"] == json(ra.outputs));
    for (const auto& f : ra.outputs) {
      if (f.size() < 4 || f.substr(f.size() - 4) != ".csv") continue;
      std::string text = slurp(a / f);
      CHECK(text.rfind("# rsolab " + std::string(kArtifactVersion) + " experiment=" + kind, 0) == 0);
      std::string second = text.substr(text.find('\n') + 1);
      CHECK(second.rfind("run,", 0) == 0);
    }
    fs::remove_all(a);
    fs::remove_all(b);
  }
}

TEST_CASE("a different seed changes the data") {
  json cfg = {{"experiment", "spectrum"}, {"seed", 1}, {"trials", 2}, {"side", 5}};
  fs::path a = scratch("seed_a"), b = scratch("seed_b");
  run_config(cfg, a.string());
  cfg["seed"] = 2;
  run_config(cfg, b.string());
  CHECK(slurp(a / "spectrum.csv") != slurp(b / "spectrum.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("exit codes") {
  fs::path d = scratch("codes");
  auto zero = run_config({{"experiment", "chain"}, {"seed", 1}, {"trials", 0}}, d.string());
  CHECK(zero.exit_code == kExitInvalid);
  CHECK_FALSE(fs::exists(d / "chain.csv"));
  CHECK_FALSE(fs::exists(d / "manifest.json"));
  CHECK(run_config({{"experiment", "nope"}, {"seed", 1}, {"trials", 1}}, d.string()).exit_code == kExitUnknown);
  CHECK(run_config({{"experiment", "chain"}, {"trials", 1}}, d.string()).exit_code == kExitInvalid);
  CHECK(run_config({{"experiment", "chain"}, {"seed", 1}, {"trials", "x"}}, d.string()).exit_code == kExitInvalid);
  CHECK(run_config(json::array(), d.string()).exit_code == kExitInvalid);
  CHECK(run_config({{"experiment", "chain"}, {"seed", 1}, {"trials", 1}, {"N", 40}}, d.string()).exit_code ==
        kExitInvalid);
  CHECK(run_config({{"experiment", "chain"}, {"seed", 1}, {"trials", 1}}, "/proc/rsolab_nope").exit_code == kExitOutput);
  auto missing = run_config_file((d / "absent.json").string());
  CHECK(missing.exit_code == kExitInvalid);
  fs::remove_all(d);
}

TEST_CASE("registry and palettes") {
  json j = list_registry(default_registry());
  std::vector<std::string> names;
  for (const auto& e : j["distributions"]) names.push_back(e["name"]);
  for (const char* want : {"bernoulli", "uniform", "three_atom"}) {
    bool found = false;
    for (const auto& n : names) found = found || n.rfind(want, 0) == 0;
    CHECK(found);
  }
  fs::path d = scratch("palette");
  fs::create_directories(d);
  {
    std::ofstream f(d / "good.json");
    f << R"({"distributions": {"coin3": {"atoms": [[0, 0.3], [2, 0.7]], "M": 2}}})";
  }
  Registry r = registry_with_palette((d / "good.json").string());
  CHECK(r.distributions.size() == default_registry().distributions.size() + 1);
  CHECK(r.distributions.count("coin3") == 1);
  {
    std::ofstream f(d / "bad.json");
    f << R"({"distributions": {"broken": {"atoms": [[0, 0.3], [2, 0.3]], "M": 2}}})";
  }
  try {
    registry_with_palette((d / "bad.json").string());
    FAIL("malformed palette accepted");
  } catch (const ConfigError& e) {
    CHECK(e.code() == kExitInvalid);
    CHECK(std::string(e.what()).find("broken") != std::string::npos);
  }
  fs::remove_all(d);
}

TEST_CASE("instance checks") {
  json tao = {{"vectors", {{1, 0, 0}, {0, 1, 0}}}};
  auto t = check_instance("taobound", tao);
  CHECK(t.exit_code == kExitOk);
  CHECK(t.report["verdict"] == "holds");
  CHECK(check_instance("nope", tao).exit_code == kExitUnknown);
  CHECK(check_instance("taobound", json::object()).exit_code == kExitInvalid);
  json cr = {{"side", 2}, {"V", {0, 1, 1, 0}}, {"Ebar", 0.1}, {"alpha", 3.0}, {"beta", 0.2}};
  auto c = check_instance("contres", cr);
  CHECK(c.exit_code == kExitOk);
  CHECK(c.report["lemma"] == "contres");
}

TEST_CASE("lemma suites") {
  for (auto suite : {eigenvar_suite, taobound_suite, contres_suite, detmsa_suite}) {
    SuiteTally s = suite(20, 3);
    CAPTURE(s.lemma);
    CHECK(s.applicable == 20);
    CHECK(s.violations == 0);
    CHECK(s.generated >= s.applicable);
  }
}

TEST_CASE("table plumbing") {
  Table t("abc", {"x", "y"});
  t.add({"1", "2"});
  CHECK(t.text("hello") == "# hello\nrun,x,y\nabc,1,2\n");
  CHECK_THROWS_AS(t.add({"1"}), std::logic_error);
  CHECK(fmt(0.1) == "0.10000000000000001");
  CHECK(config_hash(json{{"a", 1}, {"b", 2}}) == config_hash(json::parse(R"({"b":2,"a":1})")));
}
