#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "zenoest/errors.hpp"
#include "zenoest/io.hpp"

namespace zenoest::cli {

namespace fs = std::filesystem;

namespace {

struct Key {
  std::string name;
  std::string help;
  std::string fallback;  // empty: no default
};

struct Command {
  std::string name;
  std::string description;
  std::vector<Key> keys;
  std::function<FileList(const RunConfig&, const fs::path&)> run;
  // Default for T applied only when N is absent, so the pair stays exclusive.
  std::string default_total_time;
};

const std::vector<Key>& model_keys() {
  static const std::vector<Key> keys = {
      {"omega", "Rabi frequency, in units of the reference frequency", "1"},
      {"delta", "detuning", "0"},
      {"gamma", "dephasing rate", "0"},
      {"gamma_spont", "spontaneous decay rate", "0"},
      {"seed", "RNG seed", "20161"},
      {"out", "output directory (default: $ZENOEST_OUTPUT_DIR or ./zenoest_out)", ""},
  };
  return keys;
}

std::vector<Command> commands() {
  return {
      {"trajectory",
       "simulate measurement records and populations for a list of intervals",
       {{"taus", "comma-separated measurement intervals", "2.5,1.75,0.75,0.25"},
        {"N", "measurements per interval (exclusive with T)", ""},
        {"T", "total probing time (exclusive with N)", ""},
        {"samples_per_interval", "population samples per interval", "20"},
        {"initial", "initial outcome label (g or e)", "g"}},
       cmd_trajectory,
       "15"},
      {"fisher",
       "Fisher information: scan over tau, (tau, gamma) map, or growth with total time",
       {{"mode", "scan | map | growth", "scan"},
        {"tau_min", "lower end of the open tau grid", "0"},
        {"tau_max", "upper end of the tau grid", "12"},
        {"tau_points", "tau grid points (>= 100)", "600"},
        {"gamma_min", "map: smallest dephasing rate", "0"},
        {"gamma_max", "map: largest dephasing rate", "1"},
        {"gamma_points", "map: dephasing grid points", "101"},
        {"taus", "growth: comma-separated intervals", "0.3,1,3"},
        {"T", "growth: total probing time", "30"}},
       cmd_fisher,
       ""},
      {"bayes",
       "simulate or load a record and run the grid Bayes filter",
       {{"schedule", "'hybrid' or tau:count[,tau:count...]", ""},
        {"tau", "single interval, or 'opt' for the Fisher-optimal one", ""},
        {"tau_max", "search range for tau=opt", "12"},
        {"N", "measurement count for a single interval (exclusive with T)", ""},
        {"T", "total time budget (exclusive with N)", ""},
        {"grid_min", "smallest candidate", "0"},
        {"grid_max", "largest candidate", "2.5"},
        {"grid_points", "candidate count", "501"},
        {"candidates", "explicit comma-separated candidates (overrides the grid)", ""},
        {"eta", "hybrid exclusion margin in radians", "0.1"},
        {"plan_omega", "Rabi frequency assumed when planning (default: prior midpoint)", ""},
        {"record", "path stem of a record to load (stem.csv + stem.json)", ""},
        {"samples_per_interval", "population samples per interval", "20"},
        {"initial", "initial outcome label", "g"}},
       cmd_bayes,
       ""},
      {"zeno",
       "short-time survival coefficients, Zeno times and an optional flip-rate check",
       {{"initial", "initial outcome label", "g"},
        {"taus", "intervals for the Zeno time table", "0.05,0.1,0.2,0.5"},
        {"flip_tau", "interval of the simulated flip-rate check", "0.05"},
        {"flip_N", "measurements in the flip-rate check (0 disables)", "0"}},
       cmd_zeno,
       ""},
  };
}

std::string flag_name(const std::string& key) {
  std::string s = "--" + key;
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

fs::path output_dir(const RunConfig& cfg) {
  if (cfg.has("out") && !cfg.get_string("out").empty()) return cfg.get_string("out");
  if (const char* env = std::getenv("ZENOEST_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "zenoest_out";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"zenoest: repeated projective measurements, Fisher information and Bayesian "
               "estimation for small open quantum systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ZENOEST_VERSION));

  const auto table = commands();
  // Per-subcommand storage; std::map nodes keep the bound strings stable.
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> config_paths;
  for (const auto& cmd : table) {
    auto* sub = app.add_subcommand(cmd.name, cmd.description);
    sub->add_option("--config", config_paths[cmd.name],
                    "key = value file, or a manifest.json from an earlier run");
    for (const auto* keys : {&model_keys(), &cmd.keys}) {
      for (const auto& key : *keys) {
        options[cmd.name][key.name] =
            sub->add_option(flag_name(key.name), raw[cmd.name][key.name], key.help);
      }
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  const auto* chosen = app.get_subcommands().front();
  const auto& cmd = *std::find_if(table.begin(), table.end(),
                                  [&](const Command& c) { return c.name == chosen->get_name(); });

  try {
    std::set<std::string> allowed;
    for (const auto* keys : {&model_keys(), &cmd.keys}) {
      for (const auto& key : *keys) allowed.insert(key.name);
    }
    RunConfig cfg(cmd.name, allowed);
    if (!config_paths[cmd.name].empty()) cfg.load_file(config_paths[cmd.name]);
    for (const auto& [key, opt] : options[cmd.name]) {
      if (opt->count() > 0) cfg.set(key, raw[cmd.name][key]);
    }
    for (const auto* keys : {&model_keys(), &cmd.keys}) {
      for (const auto& key : *keys) {
        if (!key.fallback.empty()) cfg.set_default(key.name, key.fallback);
      }
    }
    if (!cmd.default_total_time.empty() && !cfg.has("N")) {
      cfg.set_default("T", cmd.default_total_time);
    }
    cfg.model_params();
    const auto seed = cfg.get_uint("seed");

    const fs::path dir = output_dir(cfg);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());

    auto files = cmd.run(cfg, dir);

    nlohmann::json config = nlohmann::json::object();
    for (const auto& [k, v] : cfg.values()) {
      if (k != "out") config[k] = v;
    }
    nlohmann::json manifest = {{"artifact", "zenoest"},
                               {"version", ZENOEST_VERSION},
                               {"command", cmd.name},
                               {"argv", args},
                               {"seed", seed},
                               {"config", config},
                               {"files", files}};
    write_json(dir / "manifest.json", manifest);
    for (const auto& f : files) out << (dir / f).string() << '\n';
    out << (dir / "manifest.json").string() << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidParameter& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ImpossibleRecord& e) {
    err << "impossible record: " << e.what() << '\n';
    return kImpossibleRecord;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace zenoest::cli
