#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zenoest/errors.hpp"
#include "zenoest/quantum.hpp"

namespace zenoest::cli {

/// Bad user input: unknown keys, malformed values, violated ranges.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat key/value run configuration. Values stay strings until read so the
/// manifest can reproduce exactly what the user supplied.
class RunConfig {
 public:
  RunConfig(std::string command, std::set<std::string> allowed_keys);

  /// Reads `key = value` lines ('#' starts a comment). A JSON manifest
  /// written by a previous run is accepted too; its "config" object is used.
  void load_file(const std::filesystem::path& path);
  void set(const std::string& key, const std::string& value);
  void set_default(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& command() const noexcept { return command_; }
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

  /// Rates must be >= 0; omega is in units of the reference Ω0.
  TwoLevelParams model_params() const;

 private:
  std::string command_;
  std::set<std::string> allowed_;
  std::map<std::string, std::string> values_;
};

double parse_double(const std::string& text, const std::string& what);
std::uint64_t parse_uint(const std::string& text, const std::string& what);

}  // namespace zenoest::cli
