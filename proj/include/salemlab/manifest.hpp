#pragma once

// Run manifests: what was run, on which inputs, and what it produced.
// No timestamps or host data, so identical runs give identical manifests.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"

namespace salemlab {

struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();  // flags as given on the command line
  std::map<std::string, std::string> input_digests;      // path -> sha256
  std::string tool_version;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> outputs;             // file name -> sha256
  nlohmann::json conventions = nlohmann::json::object();

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

std::string sha256_hex(std::string_view data);
/// Throws std::runtime_error when the file cannot be read.
std::string read_file(const std::filesystem::path& path);
std::string sha256_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace salemlab
