#include "report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "einlab/version.hpp"

namespace einlab::cli {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json header(const RunMeta& meta) {
  Json j;
  j["tool"] = "einlab";
  j["version"] = kVersion;
  j["command"] = meta.command;
  j["seed"] = meta.seed;
  j["config"] = meta.config;
  j["tolerances"] = meta.tolerances;
  return j;
}

std::filesystem::path output_path(const std::string& dir, const std::string& name) {
  std::filesystem::path p(name);
  if (p.is_absolute() || dir.empty()) return p;
  return std::filesystem::path(dir) / p;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::filesystem::filesystem_error("cannot write", path, std::make_error_code(std::errc::io_error));
  out << text;
}

}  // namespace einlab::cli
