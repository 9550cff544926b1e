#include "zenoest/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

#include "zenoest/errors.hpp"

namespace zenoest {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw Error("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(double value) {
  return cell(format_double(value));
}

CsvWriter& CsvWriter::cell(std::int64_t value) {
  return cell(std::to_string(value));
}

CsvWriter& CsvWriter::cell(const std::string& value) {
  if (filled_ > 0) out_ << ',';
  out_ << value;
  ++filled_;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) {
    throw Error("CsvWriter: row has " + std::to_string(filled_) + " cells, header has " +
                std::to_string(columns_));
  }
  out_ << '\n';
  filled_ = 0;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << value.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(path.string() + ": " + e.what());
  }
}

nlohmann::json schedule_to_json(const Schedule& schedule) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& seg : schedule) out.push_back({{"tau", seg.tau}, {"count", seg.count}});
  return out;
}

Schedule schedule_from_json(const nlohmann::json& value) {
  Schedule out;
  for (const auto& seg : value) {
    out.push_back({seg.at("tau").get<double>(), seg.at("count").get<std::size_t>()});
  }
  return out;
}

void write_record(const MeasurementRecord& record, const std::filesystem::path& csv_path,
                  const std::filesystem::path& json_path, const nlohmann::json& model) {
  CsvWriter csv(csv_path, {"index", "time", "outcome_label"});
  const auto times = record.times();
  for (std::size_t j = 0; j < record.size(); ++j) {
    csv.cell(j + 1).cell(times[j]).cell(record.labels.at(record.outcomes[j]));
    csv.end_row();
  }

  nlohmann::json counts = nlohmann::json::array();
  for (Eigen::Index i = 0; i < record.pair_counts.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < record.pair_counts.cols(); ++j) {
      row.push_back(record.pair_counts(i, j));
    }
    counts.push_back(row);
  }
  nlohmann::json meta = {
      {"labels", record.labels},
      {"initial_label", record.labels.at(record.initial)},
      {"n_measurements", record.size()},
      {"schedule", schedule_to_json(record.schedule)},
      {"seed", record.seed},
      {"pair_counts", counts},
      {"pair_counts_convention", "pair_counts[from][to] over (previous, next) outcomes"},
      {"model", model.is_null() ? nlohmann::json::object() : model},
  };
  if (record.schedule.size() == 1) meta["tau"] = record.schedule.front().tau;
  write_json(json_path, meta);
}

MeasurementRecord read_record(const std::filesystem::path& csv_path,
                              const std::filesystem::path& json_path) {
  const nlohmann::json meta = read_json(json_path);
  MeasurementRecord rec;
  try {
    rec.labels = meta.at("labels").get<std::vector<std::string>>();
    rec.schedule = schedule_from_json(meta.at("schedule"));
    rec.seed = meta.value("seed", std::uint64_t{0});
    const auto initial = meta.at("initial_label").get<std::string>();
    const auto it = std::find(rec.labels.begin(), rec.labels.end(), initial);
    if (it == rec.labels.end()) throw InvalidParameter("record: unknown initial label");
    rec.initial = static_cast<std::size_t>(it - rec.labels.begin());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(json_path.string() + ": " + e.what());
  }

  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open " + csv_path.string());
  std::string line;
  std::getline(in, line);
  if (line != "index,time,outcome_label") {
    throw InvalidParameter(csv_path.string() + ": unexpected header '" + line + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto last = line.rfind(',');
    if (last == std::string::npos) throw InvalidParameter(csv_path.string() + ": malformed row");
    const std::string label = line.substr(last + 1);
    const auto it = std::find(rec.labels.begin(), rec.labels.end(), label);
    if (it == rec.labels.end()) {
      throw InvalidParameter(csv_path.string() + ": unknown label '" + label + "'");
    }
    rec.outcomes.push_back(static_cast<std::size_t>(it - rec.labels.begin()));
  }
  if (schedule_length(rec.schedule) != rec.outcomes.size()) {
    throw InvalidParameter("record: schedule covers " +
                           std::to_string(schedule_length(rec.schedule)) +
                           " measurements but the CSV holds " +
                           std::to_string(rec.outcomes.size()));
  }
  rec.pair_counts = count_pairs(rec.initial, rec.outcomes, rec.labels.size());
  if (meta.contains("pair_counts")) {
    const auto stored = meta.at("pair_counts");
    for (Eigen::Index i = 0; i < rec.pair_counts.rows(); ++i) {
      for (Eigen::Index j = 0; j < rec.pair_counts.cols(); ++j) {
        if (stored.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j)).get<std::int64_t>() !=
            rec.pair_counts(i, j)) {
          throw InvalidParameter("record: pair counts in the sidecar do not match the outcomes");
        }
      }
    }
  }
  return rec;
}

void write_fisher_scan(const FisherScan& scan, const std::filesystem::path& csv_path,
                       const std::filesystem::path& json_path, const nlohmann::json& metadata) {
  CsvWriter csv(csv_path, {"tau", "F_per_measurement", "F_per_time"});
  for (std::size_t i = 0; i < scan.tau_grid.size(); ++i) {
    csv.cell(scan.tau_grid[i]).cell(scan.per_measurement[i]).cell(scan.per_time[i]);
    csv.end_row();
  }
  nlohmann::json meta = metadata;
  meta["grid"] = {{"points", scan.tau_grid.size()},
                  {"tau_min", scan.tau_grid.empty() ? 0.0 : scan.tau_grid.front()},
                  {"tau_max", scan.tau_grid.empty() ? 0.0 : scan.tau_grid.back()}};
  meta["optimum"] = {{"tau", scan.optimal_tau}, {"F_per_time", scan.optimal_value}};
  write_json(json_path, meta);
}

}  // namespace zenoest
