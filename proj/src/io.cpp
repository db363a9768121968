#include "rso/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace rso {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const nlohmann::json& cfg) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(cfg.dump())));
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Table::Table(std::string run_hash, std::vector<std::string> header) : run_(std::move(run_hash)), header_(std::move(header)) {}

void Table::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("Table: row width does not match header");
  rows_.push_back(std::move(row));
}

std::string Table::text(const std::string& manifest_line) const {
  std::string out = "# " + manifest_line + "\nrun";
  for (const auto& h : header_) out += "," + h;
  out += "\n";
  for (const auto& r : rows_) {
    out += run_;
    for (const auto& c : r) out += "," + c;
    out += "\n";
  }
  return out;
}

void ensure_writable_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir, ec)) throw OutputError("output directory cannot be created: " + dir);
  fs::path probe = fs::path(dir) / ".rsolab_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw OutputError("output directory is not writable: " + dir);
  }
  fs::remove(probe, ec);
}

void write_text(const std::string& dir, const std::string& name, const std::string& content) {
  std::filesystem::path p = std::filesystem::path(dir) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw OutputError("cannot write " + p.string());
  f << content;
  if (!f) throw OutputError("write failed for " + p.string());
}

}  // namespace rso
