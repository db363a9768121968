#pragma once
// Config-driven experiment dispatch behind the rsolab CLI.
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rso/ensembles.hpp"

namespace rso {

enum ExitCode { kExitOk = 0, kExitViolation = 1, kExitUnknown = 2, kExitInvalid = 3, kExitOutput = 4 };

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

const std::vector<std::string>& experiment_kinds();

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::string output_dir;
  std::vector<std::string> outputs;  // data files, manifest excluded
};

// output_dir_override wins over the config's output_dir when non-empty
RunResult run_config(const nlohmann::json& cfg, const std::string& output_dir_override = "");
// reads the file; RSO_OUTPUT_DIR overrides the output directory
RunResult run_config_file(const std::string& path);

// sorted catalog of distributions and ensembles
nlohmann::json list_registry(const Registry& reg);
// registry with an optional palette file merged in; throws ConfigError(3)
Registry registry_with_palette(const std::string& palette_path);

struct CheckResult {
  int exit_code = kExitOk;
  nlohmann::json report;
};
// lemma in {eigenvar, taobound, contres, detmsa}
CheckResult check_instance(const std::string& lemma, const nlohmann::json& instance);

struct SuiteTally {
  std::string lemma;
  long generated = 0, applicable = 0, violations = 0;
  double worst = 0;  // lemma-specific margin, <= 0 or <= 1 when holding
};
// generate until `want` premise-satisfying instances or 20x attempts
SuiteTally eigenvar_suite(long want, std::uint64_t seed);
SuiteTally taobound_suite(long want, std::uint64_t seed);
SuiteTally contres_suite(long want, std::uint64_t seed);
SuiteTally detmsa_suite(long want, std::uint64_t seed);

}  // namespace rso
