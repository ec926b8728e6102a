#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace einlab::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kPass = 0, kUsage = 1, kInconsistent = 2 };

/// Shortest round-trip decimal form; inf and nan spelled out.
std::string num(double v);

/// Provenance block written at the top of every output file. The worker
/// count is deliberately left out so outputs do not depend on it.
struct RunMeta {
  std::string command;
  Json config = Json::object();
  std::uint64_t seed = 0;
  Json tolerances = Json::object();
};
Json header(const RunMeta& meta);

std::filesystem::path output_path(const std::string& dir, const std::string& name);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace einlab::cli
