#include "cli/manifest.hpp"

#include <cstdio>
#include <iterator>
#include <ostream>
#include <utility>

#include "stve/errors.hpp"
#include "stve/version.hpp"

namespace stve::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return "fnv1a64:" + hex64(fnv1a64(bytes));
}

RunManifest::RunManifest() : version(kVersion) {}

RunManifest::RunManifest(std::string name) : subcommand(std::move(name)), version(kVersion) {}

// File locations are left out: inputs are covered by their digest, and the
// destination does not change the result.
std::string RunManifest::config_hash() const {
  Json hashed = config;
  for (const char* key : {"input", "u_file", "output", "out"}) hashed.erase(key);
  return hex64(fnv1a64(hashed.dump()));
}

std::string RunManifest::artifact_tag() const {
  std::string tag = "stve " + version + " " + subcommand + " config=" + config_hash();
  if (seed) tag += " seed=" + std::to_string(*seed);
  if (!input_digest.empty()) tag += " input=" + input_digest;
  return tag;
}

Json RunManifest::to_json() const {
  Json j;
  j["subcommand"] = subcommand;
  j["config"] = config;
  j["config_hash"] = config_hash();
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["version"] = version;
  j["input_digest"] = input_digest.empty() ? Json(nullptr) : Json(input_digest);
  j["config_file"] = config_file.empty() ? Json(nullptr) : Json(config_file);
  j["duration_seconds"] = duration_seconds;
  return j;
}

void write_sidecar(const std::filesystem::path& artifact, const RunManifest& manifest) {
  const std::filesystem::path path = artifact.string() + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest.to_json().dump(2) << '\n';
  if (!out.flush()) throw IoError("error writing " + path.string());
}

Output::Output(const std::string& path, std::ostream& fallback)
    : path_(path), fallback_(fallback), to_stdout_(path == "-") {
  if (!to_stdout_) {
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot write " + path);
  }
}

void Output::finish() {
  stream().flush();
  if (!stream()) throw IoError("error writing " + (to_stdout_ ? std::string("stdout") : path_));
}

}  // namespace stve::cli
