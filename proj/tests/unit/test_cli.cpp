#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/cli.hpp"
#include "zenoest/io.hpp"

namespace fs = std::filesystem;
using zenoest::cli::run_cli;

namespace {

fs::path root() {
  const char* env = std::getenv("ZENOEST_TEST_TMP");
  const fs::path p = env ? fs::path(env) : fs::temp_directory_path() / "zenoest_cli_test";
  fs::create_directories(p);
  return p;
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "zenoest");
  std::ostringstream out, err;
  const int rc = run_cli(args, out, err);
  if (err_text) *err_text = err.str();
  return rc;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

void same_outputs(const fs::path& a, const fs::path& b) {
  const auto manifest = zenoest::read_json(a / "manifest.json");
  for (const auto& f : manifest["files"]) {
    const std::string name = f.get<std::string>();
    INFO(name);
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

}  // namespace

TEST_CASE("exit codes for configuration errors") {
  const auto d = (root() / "bad").string();
  CHECK(run({"trajectory", "--N", "0", "--out", d}) == 2);
  CHECK(run({"trajectory", "--N", "5", "--T", "3", "--out", d}) == 2);
  CHECK(run({"trajectory", "--gamma", "-1", "--out", d}) == 2);
  CHECK(run({"trajectory", "--taus", "1,x", "--out", d}) == 2);
  CHECK(run({"fisher", "--mode", "spiral", "--out", d}) == 2);
  CHECK(run({"fisher", "--no-such-flag", "1"}) == 2);
  CHECK(run({}) == 2);
  CHECK(run({"--help"}) == 0);

  const auto cfg = root() / "bad.cfg";
  std::ofstream(cfg) << "omega = 1\nwarp = 9\n";
  std::string err;
  CHECK(run({"zeno", "--config", cfg.string(), "--out", d}, &err) == 2);
  CHECK(err.find("warp") != std::string::npos);
}

TEST_CASE("trajectory panels and determinism") {
  const auto a = root() / "traj_a", b = root() / "traj_b";
  REQUIRE(run({"trajectory", "--out", a.string()}) == 0);
  for (int i = 0; i < 4; ++i) {
    const auto stem = "trajectory_" + std::to_string(i);
    CHECK(fs::exists(a / (stem + "_population.csv")));
    CHECK(fs::exists(a / (stem + "_record.csv")));
    CHECK(fs::exists(a / (stem + "_record.json")));
  }
  const auto first = slurp(a / "trajectory_2_record.csv");
  REQUIRE(run({"trajectory", "--out", a.string()}) == 0);
  CHECK(slurp(a / "trajectory_2_record.csv") == first);

  REQUIRE(run({"trajectory", "--config", (a / "manifest.json").string(), "--out", b.string()}) == 0);
  same_outputs(a, b);
  const auto m = zenoest::read_json(a / "manifest.json");
  CHECK(m["seed"] == 20161);
  CHECK(m["config"]["taus"] == "2.5,1.75,0.75,0.25");
}

TEST_CASE("config file with flag override") {
  const auto cfg = root() / "run.cfg";
  std::ofstream(cfg) << "# Zeno regime\nomega = 2\ntaus = 0.1\nN = 50  # short\nseed = 9\n";
  const auto d = root() / "cfg_run";
  REQUIRE(run({"trajectory", "--config", cfg.string(), "--seed", "10", "--out", d.string()}) == 0);
  const auto m = zenoest::read_json(d / "manifest.json");
  CHECK(m["config"]["omega"] == "2");
  CHECK(m["config"]["seed"] == "10");
  CHECK(m["config"]["N"] == "50");
  CHECK_FALSE(m["config"].contains("T"));
}

TEST_CASE("output directory from the environment") {
  const auto d = root() / "from_env";
  fs::remove_all(d);
  setenv("ZENOEST_OUTPUT_DIR", d.string().c_str(), 1);
  CHECK(run({"zeno"}) == 0);
  unsetenv("ZENOEST_OUTPUT_DIR");
  CHECK(fs::exists(d / "zeno.json"));
  CHECK(fs::exists(d / "manifest.json"));
}

TEST_CASE("fisher modes") {
  const auto scan = root() / "scan";
  REQUIRE(run({"fisher", "--tau-max", "6", "--tau-points", "120", "--out", scan.string()}) == 0);
  for (const auto& row : read_csv(scan / "fisher_scan.csv")) {
    CHECK(row[2] == doctest::Approx(row[0]).epsilon(1e-12));
  }

  const auto growth = root() / "growth";
  REQUIRE(run({"fisher", "--mode", "growth", "--taus", "3,0.3", "--T", "30", "--out",
               growth.string()}) == 0);
  const auto g = zenoest::read_json(growth / "fisher_growth.json");
  CHECK(g["curves"][0]["F_total"].get<double>() > g["curves"][1]["F_total"].get<double>());
  CHECK(g["curves"][0]["F_total"].get<double>() == doctest::Approx(10 * 9.0));

  const auto map = root() / "map";
  REQUIRE(run({"fisher", "--mode", "map", "--gamma-min", "0", "--gamma-max", "0.2",
               "--gamma-points", "3", "--tau-points", "1200", "--out", map.string()}) == 0);
  const auto ridge = read_csv(map / "fisher_ridge.csv");
  REQUIRE(ridge.size() == 3);
  CHECK(ridge[0][1] == doctest::Approx(12.0));
  CHECK(std::abs(ridge[1][1] - 4.83) < 0.05);
  CHECK(read_csv(map / "fisher_map.csv").size() == 3 * 1200);
}

TEST_CASE("zeno command") {
  const auto d = root() / "zeno";
  REQUIRE(run({"zeno", "--gamma-spont", "0.4", "--omega", "0", "--initial", "e", "--out",
               d.string()}) == 0);
  const auto z = zenoest::read_json(d / "zeno.json");
  CHECK(std::abs(std::abs(z["a"].get<double>()) - 0.4) < 1e-12);

  REQUIRE(run({"zeno", "--flip-N", "100000", "--out", d.string()}) == 0);
  const auto f = zenoest::read_json(d / "zeno.json");
  CHECK(f["b"].get<double>() == doctest::Approx(-0.25));
  CHECK(std::abs(f["flip"]["frequency"].get<double>() / (0.05 * 0.05 / 4) - 1) < 0.1);
}

TEST_CASE("bayes command") {
  const auto three = root() / "three";
  REQUIRE(run({"bayes", "--candidates", "0.5,1,1.5", "--tau", "1", "--N", "200", "--out",
               three.string()}) == 0);
  const auto rows = read_csv(three / "bayes_posterior.csv");
  REQUIRE(rows.size() == 201);
  CHECK(rows.back().size() == 5);
  CHECK(rows.back()[3] > 0.99);

  const auto hyb = root() / "hybrid";
  REQUIRE(run({"bayes", "--schedule", "hybrid", "--T", "100", "--gamma", "0.1", "--plan-omega",
               "1", "--out", hyb.string()}) == 0);
  const auto plan = zenoest::read_json(hyb / "bayes_plan.json");
  CHECK(plan["n_total"].get<int>() > plan["q"].get<int>());
  const auto stats = zenoest::read_json(hyb / "bayes_stats.json");
  CHECK(stats["peaks"].size() >= 1);

  CHECK(run({"bayes", "--schedule", "hybrid", "--N", "10", "--out", hyb.string()}) == 2);
  CHECK(run({"bayes", "--schedule", "1:x", "--out", hyb.string()}) == 2);

  // A record with flips is impossible under a frozen (Ω = 0) hypothesis.
  const auto src = root() / "flips";
  REQUIRE(run({"trajectory", "--taus", "1", "--N", "50", "--out", src.string()}) == 0);
  std::string err;
  CHECK(run({"bayes", "--candidates", "0", "--record", (src / "trajectory_0_record").string(),
             "--out", (root() / "impossible").string()},
            &err) == 4);
  CHECK(err.find("impossible") != std::string::npos);
}
