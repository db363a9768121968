#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rso/experiments.hpp"

int main(int argc, char** argv) {
  using namespace rso;
  CLI::App app{"rsolab: random Schroedinger operator experiments"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config, "config file")->required();

  std::string palette;
  auto* list = app.add_subcommand("list", "print the distribution and ensemble registry");
  list->add_option("--palette", palette, "palette file to merge");

  std::string lemma, instance;
  auto* check = app.add_subcommand("check", "check one lemma instance");
  check->add_option("lemma", lemma, "eigenvar | taobound | contres | detmsa")->required();
  check->add_option("instance", instance, "instance JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  if (*run) {
    RunResult r = run_config_file(config);
    (r.exit_code == kExitOk ? std::cout : std::cerr) << r.message << "\n";
    return r.exit_code;
  }
  if (*list) {
    try {
      std::cout << list_registry(registry_with_palette(palette)).dump(2) << "\n";
    } catch (const ConfigError& e) {
      std::cerr << e.what() << "\n";
      return e.code();
    }
    return kExitOk;
  }
  nlohmann::json inst;
  try {
    std::ifstream f(instance);
    if (!f) {
      std::cerr << "cannot read " << instance << "\n";
      return kExitInvalid;
    }
    inst = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "instance does not parse: " << e.what() << "\n";
    return kExitInvalid;
  }
  CheckResult c = check_instance(lemma, inst);
  std::cout << c.report.dump(2) << "\n";
  return c.exit_code;
}
