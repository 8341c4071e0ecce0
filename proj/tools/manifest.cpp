#include "manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "bcnorm/error.hpp"
#include "bcnorm/version.hpp"
#include "input.hpp"

namespace bcnorm::cli {
namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void RunManifest::add_input(const std::string& path) {
  inputs[path] = path == "-" ? "stdin" : "fnv1a64:" + file_digest(path);
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = has_seed ? nlohmann::ordered_json(seed) : nlohmann::ordered_json(nullptr);
  j["version"] = kVersion;
  j["timestamp"] = utc_now();
  j["inputs"] = inputs;
  return j;
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << to_json().dump(2) << '\n';
}

}  // namespace bcnorm::cli
