#pragma once
// Output plumbing: config hashing, CSV tables with a '#' provenance line and
// a run column, and run manifests.
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace rso {

inline constexpr const char* kArtifactVersion = "0.1.0";

std::uint64_t fnv1a(std::string_view s);
// hex FNV-1a of the canonical (key-sorted, compact) dump
std::string config_hash(const nlohmann::json& cfg);

std::string fmt(double v);  // %.17g, round-trips

class Table {
 public:
  Table(std::string run_hash, std::vector<std::string> header);
  void add(std::vector<std::string> row);
  std::size_t rows() const { return rows_.size(); }
  // "# <manifest_line>" then "run,<header...>" then rows
  std::string text(const std::string& manifest_line) const;

 private:
  std::string run_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// creates the directory if needed; throws OutputError when it cannot be written
void ensure_writable_dir(const std::string& dir);
void write_text(const std::string& dir, const std::string& name, const std::string& content);

}  // namespace rso
