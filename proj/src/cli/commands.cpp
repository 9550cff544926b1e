#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "zenoest/bayes.hpp"
#include "zenoest/fisher.hpp"
#include "zenoest/grid.hpp"
#include "zenoest/io.hpp"
#include "zenoest/measurement.hpp"
#include "zenoest/quantum.hpp"

namespace zenoest::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json model_json(const TwoLevelParams& p) {
  return {{"omega", p.omega}, {"delta", p.delta}, {"gamma", p.gamma},
          {"gamma_spont", p.gamma_spont}};
}

// Measurement count for an interval: N directly, or ⌊T/τ⌋.
std::size_t measurement_count(const RunConfig& cfg, double tau) {
  if (cfg.has("N") && cfg.has("T")) throw ConfigError("give either N or T, not both");
  if (cfg.has("N")) {
    const auto n = cfg.get_uint("N");
    if (n == 0) throw ConfigError("N must be at least 1");
    return static_cast<std::size_t>(n);
  }
  if (!cfg.has("T")) throw ConfigError("one of N or T is required");
  const double total = cfg.get_double("T");
  if (!(total > 0.0)) throw ConfigError("T must be positive");
  const auto n = static_cast<std::size_t>(std::floor(total / tau * (1.0 + 1e-12)));
  if (n == 0) throw ConfigError("T is shorter than one interval");
  return n;
}

double positive(const RunConfig& cfg, const std::string& key) {
  const double v = cfg.get_double(key);
  if (!(v > 0.0)) throw ConfigError(key + " must be positive");
  return v;
}

std::size_t grid_points(const RunConfig& cfg, const std::string& key, std::size_t min) {
  const auto n = cfg.get_uint(key);
  if (n < min) throw ConfigError(key + " must be at least " + std::to_string(min));
  return static_cast<std::size_t>(n);
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_population(const PopulationSeries& series, std::size_t column,
                      const std::string& name, const fs::path& path) {
  CsvWriter csv(path, {"time", name});
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    csv.cell(series.times[i]).cell(series.populations(static_cast<Eigen::Index>(i),
                                                      static_cast<Eigen::Index>(column)));
    csv.end_row();
  }
}

std::size_t count_flips(const MeasurementRecord& record) {
  std::size_t flips = 0;
  std::size_t prev = record.initial;
  for (auto o : record.outcomes) {
    if (o != prev) ++flips;
    prev = o;
  }
  return flips;
}

Schedule parse_schedule(const std::string& text) {
  Schedule out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("schedule entry '" + item + "' is not tau:count");
    }
    ScheduleSegment seg;
    seg.tau = parse_double(item.substr(0, colon), "schedule tau");
    seg.count = static_cast<std::size_t>(parse_uint(item.substr(colon + 1), "schedule count"));
    if (!(seg.tau > 0.0) || seg.count == 0) {
      throw ConfigError("schedule entries need tau > 0 and count >= 1");
    }
    out.push_back(seg);
  }
  if (out.empty()) throw ConfigError("empty schedule");
  return out;
}

json plan_json(const HybridPlan& plan) {
  return {{"q", plan.q},
          {"tau_s", plan.tau_s},
          {"tau_opt", plan.tau_opt},
          {"n_total", plan.n_total},
          {"epsilon", plan.epsilon},
          {"distance", plan.distance},
          {"trace_distance", plan.trace_distance},
          {"eta", plan.eta},
          {"total_time", plan.total_time},
          {"duration", plan.duration()},
          {"opposite_omega", plan.opposite_omega},
          {"iterations", plan.iterations},
          {"tau_opt_capped", plan.tau_opt_capped},
          {"schedule", schedule_to_json(plan.schedule())}};
}

}  // namespace

FileList cmd_trajectory(const RunConfig& cfg, const fs::path& dir) {
  const auto params = cfg.model_params();
  const auto model = two_level_model(params);
  const auto basis = MeasurementBasis::two_level();
  const auto taus = cfg.get_double_list("taus");
  const auto seed = cfg.get_uint("seed");
  const auto samples = static_cast<std::size_t>(cfg.get_uint("samples_per_interval"));
  const auto initial = cfg.get_string("initial");
  basis.index_of(initial);
  const auto excited = basis.index_of("e");

  FileList files;
  json panels = json::array();
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double tau = taus[i];
    if (!(tau > 0.0)) throw ConfigError("taus must be positive");
    const auto n = measurement_count(cfg, tau);
    const auto traj =
        simulate_trajectory(model, basis, tau, n, seed + i, samples, initial);

    const std::string stem = "trajectory_" + std::to_string(i);
    write_population(traj.series, excited, "excited_population", dir / (stem + "_population.csv"));
    write_record(traj.record, dir / (stem + "_record.csv"), dir / (stem + "_record.json"),
                 model_json(params));
    files.insert(files.end(), {stem + "_population.csv", stem + "_record.csv",
                               stem + "_record.json"});

    const auto flips = count_flips(traj.record);
    panels.push_back({{"panel", i},
                      {"tau", tau},
                      {"n_measurements", n},
                      {"seed", seed + i},
                      {"flips", flips},
                      {"flip_frequency", static_cast<double>(flips) / static_cast<double>(n)}});
  }
  write_json(dir / "trajectory_summary.json",
             {{"model", model_json(params)}, {"initial", initial}, {"panels", panels}});
  files.push_back("trajectory_summary.json");
  return files;
}

FileList cmd_fisher(const RunConfig& cfg, const fs::path& dir) {
  auto params = cfg.model_params();
  const auto mode = cfg.get_string("mode");
  FileList files;

  if (mode == "scan" || mode == "map") {
    const double tau_min = cfg.get_double("tau_min");
    const double tau_max = positive(cfg, "tau_max");
    if (tau_min < 0.0 || tau_min >= tau_max) throw ConfigError("need 0 <= tau_min < tau_max");
    const auto points = grid_points(cfg, "tau_points", 100);
    const auto taus = open_grid(tau_min, tau_max, points);

    if (mode == "scan") {
      const auto scan = fisher_scan(params, taus);
      const auto [t_opt, f_opt] =
          optimal_tau(params.omega, params.delta, params.gamma, {tau_min, tau_max}, points);
      json meta = {{"model", model_json(params)},
                   {"refined_optimum",
                    {{"tau", t_opt}, {"F_per_time", f_opt}, {"F_per_measurement", f_opt * t_opt}}}};
      write_fisher_scan(scan, dir / "fisher_scan.csv", dir / "fisher_scan.json", meta);
      CsvWriter opt(dir / "fisher_scan_optimum.csv", {"tau", "F_per_measurement", "F_per_time"});
      opt.cell(t_opt).cell(f_opt * t_opt).cell(f_opt);
      opt.end_row();
      return {"fisher_scan.csv", "fisher_scan.json", "fisher_scan_optimum.csv"};
    }

    const double g_min = cfg.get_double("gamma_min");
    const double g_max = cfg.get_double("gamma_max");
    if (g_min < 0.0 || g_max < g_min) throw ConfigError("need 0 <= gamma_min <= gamma_max");
    const auto gammas = linspace(g_min, g_max, grid_points(cfg, "gamma_points", 1));

    CsvWriter map(dir / "fisher_map.csv", {"gamma", "tau", "F_per_measurement", "F_per_time"});
    CsvWriter ridge(dir / "fisher_ridge.csv", {"gamma", "tau_opt", "F_per_time_opt"});
    for (double g : gammas) {
      params.gamma = g;
      const auto scan = fisher_scan(params, taus);
      for (std::size_t i = 0; i < taus.size(); ++i) {
        map.cell(g).cell(taus[i]).cell(scan.per_measurement[i]).cell(scan.per_time[i]);
        map.end_row();
      }
      const auto [t_opt, f_opt] =
          optimal_tau(params.omega, params.delta, g, {tau_min, tau_max}, points);
      ridge.cell(g).cell(t_opt).cell(f_opt);
      ridge.end_row();
    }
    return {"fisher_map.csv", "fisher_ridge.csv"};
  }

  if (mode == "growth") {
    const auto taus = cfg.get_double_list("taus");
    const double total = positive(cfg, "T");
    CsvWriter csv(dir / "fisher_growth.csv", {"tau", "time", "fisher"});
    json summary = json::array();
    for (double tau : taus) {
      if (!(tau > 0.0)) throw ConfigError("taus must be positive");
      const double f = rabi_fisher_per_measurement(params, tau);
      const auto n = static_cast<std::size_t>(std::floor(total / tau * (1.0 + 1e-12)));
      for (std::size_t k = 0; k <= n; ++k) {
        csv.cell(tau).cell(static_cast<double>(k) * tau).cell(static_cast<double>(k) * f);
        csv.end_row();
      }
      if (static_cast<double>(n) * tau < total) {
        csv.cell(tau).cell(total).cell(static_cast<double>(n) * f);
        csv.end_row();
      }
      summary.push_back({{"tau", tau},
                         {"F_per_measurement", f},
                         {"n_measurements", n},
                         {"F_total", static_cast<double>(n) * f}});
    }
    write_json(dir / "fisher_growth.json",
               {{"model", model_json(params)}, {"T", total}, {"curves", summary}});
    return {"fisher_growth.csv", "fisher_growth.json"};
  }

  throw ConfigError("mode must be scan, map or growth (got '" + mode + "')");
}

FileList cmd_bayes(const RunConfig& cfg, const fs::path& dir) {
  const auto params = cfg.model_params();
  const auto basis = MeasurementBasis::two_level();
  const auto seed = cfg.get_uint("seed");

  std::optional<PosteriorGrid> prior;
  json grid_meta;
  if (cfg.has("candidates")) {
    auto c = cfg.get_double_list("candidates");
    prior.emplace(c, std::vector<double>(c.size(), 1.0 / static_cast<double>(c.size())));
    grid_meta = {{"candidates", c}};
  } else {
    const double lo = cfg.get_double("grid_min");
    const double hi = cfg.get_double("grid_max");
    const auto n = grid_points(cfg, "grid_points", 2);
    if (lo < 0.0 || hi <= lo) throw ConfigError("need 0 <= grid_min < grid_max");
    prior.emplace(PosteriorGrid::uniform(lo, hi, n));
    grid_meta = {{"min", lo}, {"max", hi}, {"points", n}};
  }
  const auto& cands = prior->candidates();
  const double omega_max = cands.back();
  const double plan_omega = cfg.has("plan_omega") ? cfg.get_double("plan_omega")
                                                  : 0.5 * (cands.front() + cands.back());

  FileList files;
  Schedule schedule;
  std::optional<HybridPlan> plan;
  const std::string spec = cfg.has("schedule") ? cfg.get_string("schedule") : "";
  if (spec == "hybrid") {
    if (cfg.has("N")) throw ConfigError("the hybrid schedule is sized by T, not N");
    plan = plan_hybrid(positive(cfg, "T"), params.gamma, plan_omega, omega_max,
                       cfg.get_double("eta"));
    schedule = plan->schedule();
    json pj = plan_json(*plan);
    pj["plan_omega"] = plan_omega;
    pj["omega_max"] = omega_max;
    write_json(dir / "bayes_plan.json", pj);
    files.push_back("bayes_plan.json");
  } else if (!spec.empty()) {
    schedule = parse_schedule(spec);
  } else if (cfg.has("tau")) {
    double tau = 0.0;
    if (cfg.get_string("tau") == "opt") {
      tau = optimal_tau(plan_omega, params.delta, params.gamma, {0.0, positive(cfg, "tau_max")},
                        4000)
                .first;
    } else {
      tau = positive(cfg, "tau");
    }
    schedule = {{tau, measurement_count(cfg, tau)}};
  } else if (!cfg.has("record")) {
    throw ConfigError("need schedule, tau or record");
  }

  MeasurementRecord record;
  if (cfg.has("record")) {
    const fs::path stem = cfg.get_string("record");
    try {
      record = read_record(fs::path(stem).concat(".csv"), fs::path(stem).concat(".json"));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("cannot load record: ") + e.what());
    }
    if (schedule.empty()) schedule = record.schedule;
  } else {
    const auto samples = static_cast<std::size_t>(cfg.get_uint("samples_per_interval"));
    const auto traj = simulate_schedule(two_level_model(params), basis, schedule, seed, samples,
                                        cfg.get_string("initial"));
    record = traj.record;
    write_population(traj.series, basis.index_of("g"), "ground_population",
                     dir / "bayes_population.csv");
    files.push_back("bayes_population.csv");
  }
  write_record(record, dir / "bayes_record.csv", dir / "bayes_record.json", model_json(params));
  files.insert(files.end(), {"bayes_record.csv", "bayes_record.json"});

  const auto trajectory = run_filter(record, *prior, rabi_family(params), basis, schedule);

  std::vector<std::string> header = {"index", "time"};
  for (double c : cands) header.push_back(short_number(c));
  CsvWriter csv(dir / "bayes_posterior.csv", header);
  const auto times = record.times();
  for (std::size_t j = 0; j < trajectory.size(); ++j) {
    csv.cell(j).cell(j == 0 ? 0.0 : times[j - 1]);
    for (double w : trajectory[j].weights()) csv.cell(w);
    csv.end_row();
  }
  files.push_back("bayes_posterior.csv");

  json meta = {{"model", model_json(params)},
               {"grid", grid_meta},
               {"schedule", schedule_to_json(schedule)},
               {"seed", record.seed},
               {"columns", "index, time, then one weight column per candidate"}};
  if (plan) meta["plan"] = plan_json(*plan);
  write_json(dir / "bayes_posterior.json", meta);
  files.push_back("bayes_posterior.json");

  const auto& final_post = trajectory.back();
  const auto stats = posterior_stats(final_post);
  json aliases = json::array();
  for (const auto& seg : schedule) {
    aliases.push_back({{"tau", seg.tau},
                       {"candidates",
                        ambiguous_candidates(params.omega, params.gamma, seg.tau, omega_max)}});
  }
  write_json(dir / "bayes_stats.json",
             {{"map", stats.map},
              {"mean", stats.mean},
              {"variance", stats.variance},
              {"peaks", stats.peaks},
              {"n_peaks", stats.peaks.size()},
              {"true_omega", params.omega},
              {"weight_at_true", final_post.weight_at(final_post.nearest(params.omega))},
              {"n_measurements", record.size()},
              {"duration", schedule_duration(schedule)},
              {"ambiguous_candidates", aliases}});
  files.push_back("bayes_stats.json");
  return files;
}

FileList cmd_zeno(const RunConfig& cfg, const fs::path& dir) {
  const auto params = cfg.model_params();
  const auto model = two_level_model(params);
  const auto basis = MeasurementBasis::two_level();
  const auto initial = cfg.get_string("initial");
  const auto start = basis.index_of(initial);
  const auto coeffs = zeno_coefficients(model, basis.state(start));

  json rates = json::array();
  for (double tau : cfg.get_double_list("taus")) {
    if (!(tau > 0.0)) throw ConfigError("taus must be positive");
    const double rate = coeffs.zeno_rate(tau);
    rates.push_back({{"tau", tau},
                     {"zeno_rate", rate},
                     {"zeno_time", rate > 0.0 ? json(1.0 / rate) : json(nullptr)}});
  }
  json out = {{"model", model_json(params)},
              {"initial", initial},
              {"a", coeffs.a},
              {"b", coeffs.b},
              {"zeno_times", rates}};

  const auto flip_n = cfg.get_uint("flip_N");
  if (flip_n > 0) {
    const double tau = positive(cfg, "flip_tau");
    const auto seed = cfg.get_uint("seed");
    const auto traj = simulate_trajectory(model, basis, tau, static_cast<std::size_t>(flip_n),
                                          seed, 0, initial);
    const double n = static_cast<double>(flip_n);
    const double freq = static_cast<double>(count_flips(traj.record)) / n;
    const auto kernel = transition_kernel(model, basis, tau);
    out["flip"] = {{"tau", tau},
                   {"n_measurements", flip_n},
                   {"seed", seed},
                   {"frequency", freq},
                   {"standard_error", std::sqrt(freq * (1.0 - freq) / n)},
                   {"zeno_prediction", tau * coeffs.zeno_rate(tau) - coeffs.a * tau},
                   {"single_step_exact", 1.0 - kernel(start, start)}};
  }
  write_json(dir / "zeno.json", out);
  return {"zeno.json"};
}

}  // namespace zenoest::cli
