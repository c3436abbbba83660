#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace stve::cli {

using Json = nlohmann::ordered_json;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// "fnv1a64:<hex>" over the file bytes. Throws IoError if the file can't be read.
std::string file_digest(const std::filesystem::path& path);

struct RunManifest {
  std::string subcommand;
  /// Resolved option values after flags, config file and defaults.
  Json config = Json::object();
  std::optional<std::uint64_t> seed;
  std::string version;
  std::string input_digest;
  /// JSON file the option values were partly taken from, if any.
  std::string config_file;
  double duration_seconds = 0.0;

  RunManifest();
  explicit RunManifest(std::string subcommand);

  /// Hash of the resolved config only, so it is stable across runs.
  std::string config_hash() const;
  /// Deterministic one-line tag for "# ..." comment lines in output tables.
  std::string artifact_tag() const;
  Json to_json() const;
};

/// Writes `<artifact>.manifest.json` next to an output file.
void write_sidecar(const std::filesystem::path& artifact, const RunManifest& manifest);

/// An output destination; "-" selects the fallback stream (stdout).
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback);

  std::ostream& stream() { return to_stdout_ ? fallback_ : file_; }
  bool is_stdout() const noexcept { return to_stdout_; }
  const std::string& path() const noexcept { return path_; }
  /// Flushes and checks the stream; throws IoError on failure.
  void finish();

 private:
  std::string path_;
  std::ostream& fallback_;
  std::ofstream file_;
  bool to_stdout_;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace stve::cli
