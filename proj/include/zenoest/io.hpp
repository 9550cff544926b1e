#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "zenoest/fisher.hpp"
#include "zenoest/measurement.hpp"

namespace zenoest {

/// Locale-independent shortest-safe rendering with 17 significant digits.
std::string format_double(double value);

/// Minimal CSV writer: header row first, '\n' line endings, numbers via
/// format_double.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& cell(double value);
  CsvWriter& cell(std::int64_t value);
  CsvWriter& cell(std::size_t value) { return cell(static_cast<std::int64_t>(value)); }
  CsvWriter& cell(const std::string& value);
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& value);
nlohmann::json read_json(const std::filesystem::path& path);

nlohmann::json schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const nlohmann::json& value);

/// Record CSV (index, time, outcome_label) plus a JSON sidecar with labels,
/// initial label, schedule, seed, pair counts and caller-supplied metadata
/// (stored under "model").
void write_record(const MeasurementRecord& record, const std::filesystem::path& csv_path,
                  const std::filesystem::path& json_path, const nlohmann::json& model = {});

MeasurementRecord read_record(const std::filesystem::path& csv_path,
                              const std::filesystem::path& json_path);

/// FisherScan CSV (tau, F_per_measurement, F_per_time) plus JSON metadata.
void write_fisher_scan(const FisherScan& scan, const std::filesystem::path& csv_path,
                       const std::filesystem::path& json_path, const nlohmann::json& metadata);

}  // namespace zenoest
