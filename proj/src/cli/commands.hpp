#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace zenoest::cli {

/// Each command writes into `dir` and returns the names of the files it
/// produced (relative to dir), in the order written.
using FileList = std::vector<std::string>;

FileList cmd_trajectory(const RunConfig& cfg, const std::filesystem::path& dir);
FileList cmd_fisher(const RunConfig& cfg, const std::filesystem::path& dir);
FileList cmd_bayes(const RunConfig& cfg, const std::filesystem::path& dir);
FileList cmd_zeno(const RunConfig& cfg, const std::filesystem::path& dir);

}  // namespace zenoest::cli
