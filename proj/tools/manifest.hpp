#pragma once

#include <string>

#include <json.hpp>

namespace bcnorm::cli {

/// What produced an output: command, effective configuration, seed, library
/// version, UTC timestamp and the digest of every input file.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();  ///< path -> digest
  std::uint64_t seed = 0;
  bool has_seed = false;

  void add_input(const std::string& path);
  nlohmann::ordered_json to_json() const;
  /// Writes the manifest as pretty JSON.
  void write(const std::string& path) const;
};

}  // namespace bcnorm::cli
