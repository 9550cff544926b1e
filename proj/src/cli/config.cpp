#include "cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "zenoest/io.hpp"

namespace zenoest::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() ||
      !std::isfinite(value)) {
    throw ConfigError(what + ": '" + text + "' is not a finite number");
  }
  return value;
}

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::uint64_t value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError(what + ": '" + text + "' is not a non-negative integer");
  }
  return value;
}

RunConfig::RunConfig(std::string command, std::set<std::string> allowed_keys)
    : command_(std::move(command)), allowed_(std::move(allowed_keys)) {}

void RunConfig::load_file(const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    nlohmann::json manifest;
    try {
      manifest = read_json(path);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    if (manifest.contains("command") && manifest["command"] != command_) {
      throw ConfigError(path.string() + " is a manifest for '" +
                        manifest["command"].get<std::string>() + "', not '" + command_ + "'");
    }
    if (!manifest.contains("config") || !manifest["config"].is_object()) {
      throw ConfigError(path.string() + ": no \"config\" object");
    }
    for (const auto& [key, value] : manifest["config"].items()) {
      if (key == "out") continue;
      set(key, value.is_string() ? value.get<std::string>() : value.dump());
    }
    return;
  }

  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (allowed_.count(key) == 0) {
    throw ConfigError("unknown key '" + key + "' for command '" + command_ + "'");
  }
  values_[key] = value;
}

void RunConfig::set_default(const std::string& key, const std::string& value) {
  if (!has(key)) set(key, value);
}

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  return parse_double(get_string(key), key);
}

std::uint64_t RunConfig::get_uint(const std::string& key) const {
  return parse_uint(get_string(key), key);
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(item, key));
  }
  if (out.empty()) throw ConfigError("key '" + key + "' needs at least one value");
  return out;
}

TwoLevelParams RunConfig::model_params() const {
  TwoLevelParams p;
  p.omega = get_double("omega");
  p.delta = get_double("delta");
  p.gamma = get_double("gamma");
  p.gamma_spont = get_double("gamma_spont");
  if (p.omega < 0.0 || p.gamma < 0.0 || p.gamma_spont < 0.0) {
    throw ConfigError("omega, gamma and gamma_spont must be >= 0");
  }
  return p;
}

}  // namespace zenoest::cli
