#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "zenoest/bayes.hpp"
#include "zenoest/errors.hpp"
#include "zenoest/grid.hpp"

using namespace zenoest;
using std::numbers::pi;

namespace {

const MeasurementBasis& basis() {
  static const MeasurementBasis b = MeasurementBasis::two_level();
  return b;
}

std::vector<TransitionKernel> kernels_for(const PosteriorGrid& grid, const TwoLevelParams& p,
                                          double tau) {
  std::vector<TransitionKernel> ks;
  const auto family = rabi_family(p);
  for (double c : grid.candidates()) ks.push_back(transition_kernel(family(c), basis(), tau));
  return ks;
}

double weight_sum(const PosteriorGrid& g) {
  double s = 0;
  for (double w : g.weights()) s += w;
  return s;
}

// Coarse measurement count from the ε rule, written out directly.
std::size_t coarse_rule(std::size_t n, double distance) {
  const double eps = 0.5 + std::log(distance) / std::log(static_cast<double>(n));
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(std::pow(double(n), 1 - eps) - 1e-9)));
}

}  // namespace

TEST_CASE("posterior grid validation") {
  CHECK_THROWS(PosteriorGrid({1, 1}, {0.5, 0.5}));
  CHECK_THROWS(PosteriorGrid({1, 2}, {0.5, 0.6}));
  CHECK_THROWS(PosteriorGrid({1, 2}, {0.5}));
  const auto u = PosteriorGrid::uniform(0, 2.5, 501);
  CHECK(u.size() == 501);
  CHECK(u.candidates()[200] == doctest::Approx(1.0));
  CHECK(u.nearest(1.0012) == 200);
}

TEST_CASE("bayes update examples") {
  const auto prior = PosteriorGrid({0.5, 1.0, 1.5}, {0.2, 0.5, 0.3});
  TransitionKernel same{RealMatrix::Constant(2, 2, 0.5), 1.0, {"g", "e"}};
  const auto unchanged = bayes_update(prior, {same, same, same}, 0, 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(unchanged.weight_at(i) == doctest::Approx(prior.weight_at(i)));

  RealMatrix stay = RealMatrix::Identity(2, 2);
  RealMatrix mix = RealMatrix::Constant(2, 2, 0.5);
  const auto two = PosteriorGrid({1, 2}, {0.5, 0.5});
  const auto after = bayes_update(two, {{stay, 1, {}}, {mix, 1, {}}}, 0, 1);
  CHECK(after.weight_at(0) == 0.0);
  CHECK(after.weight_at(1) == 1.0);

  CHECK_THROWS_AS(bayes_update(two, {{stay, 1, {}}, {stay, 1, {}}}, 0, 1), ImpossibleRecord);
}

TEST_CASE("log-domain guard keeps tiny likelihoods usable") {
  auto post = PosteriorGrid({1, 2}, {0.5, 0.5});
  RealMatrix a(2, 2), b(2, 2);
  a << 1 - 1e-200, 1 - 1e-200, 1e-200, 1e-200;
  b << 1 - 3e-200, 1 - 3e-200, 3e-200, 3e-200;
  for (int i = 0; i < 3; ++i) post = bayes_update(post, {{a, 1, {}}, {b, 1, {}}}, 0, 1);
  CHECK(post.weight_at(1) == doctest::Approx(27.0 / 28.0));
  CHECK(weight_sum(post) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("three candidates: the true value wins") {
  const auto prior = PosteriorGrid({0.5, 1.0, 1.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto t = simulate_trajectory(two_level_model(1, 0, 0, 0), basis(), 1.0, 200, seed, 0);
    const auto traj = run_filter(t.record, prior, rabi_family({1, 0, 0, 0}), basis(), {{1.0, 200}});
    for (const auto& p : traj) CHECK(std::abs(weight_sum(p) - 1.0) < 1e-12);
    if (traj.back().weight_at(1) > 0.99) ++wins;
  }
  CHECK(wins >= 9);
}

TEST_CASE("filter consistency over seeds") {
  const auto prior = PosteriorGrid::uniform(0, 2.5, 101);
  const std::size_t truth = prior.nearest(1.0);
  double mean_final = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto t = simulate_trajectory(two_level_model(1, 0, 0.1, 0), basis(), 1.5, 40, seed, 0);
    const auto traj = run_filter(t.record, prior, rabi_family({1, 0, 0.1, 0}), basis(), {{1.5, 40}});
    mean_final += traj.back().weight_at(truth) / 20;
  }
  CHECK(mean_final > prior.weight_at(truth));
}

TEST_CASE("run filter bookkeeping") {
  const auto prior = PosteriorGrid::uniform(0.5, 1.5, 11);
  MeasurementRecord empty;
  empty.labels = {"g", "e"};
  empty.pair_counts = CountMatrix::Zero(2, 2);
  const auto traj = run_filter(empty, prior, rabi_family({}), basis(), {});
  REQUIRE(traj.size() == 1);
  CHECK(traj[0].weights() == prior.weights());

  const auto t = simulate_trajectory(two_level_model(1, 0, 0, 0), basis(), 0.8, 10, 5, 0);
  CHECK_THROWS_AS(run_filter(t.record, prior, rabi_family({}), basis(), {{0.8, 9}}), InvalidParameter);
  CHECK_THROWS_AS(run_filter(t.record, prior, rabi_family({}), basis(), {{0.9, 10}}), InvalidParameter);
  CHECK(run_filter(t.record, prior, rabi_family({}), basis(), {{0.8, 10}}).size() == 11);
}

TEST_CASE("posterior statistics") {
  std::vector<double> w(5, 0.0);
  w[3] = 1.0;
  const auto delta = posterior_stats(PosteriorGrid({1, 2, 3, 4, 5}, w));
  CHECK(delta.map == 4);
  CHECK(delta.variance == 0.0);
  CHECK(delta.peaks == std::vector<double>{4});

  const auto flat = posterior_stats(PosteriorGrid::uniform(0, 4, 5));
  CHECK(flat.map == 0.0);
  CHECK(flat.mean == doctest::Approx(2.0));
  CHECK(flat.variance == doctest::Approx(2.0));
}

TEST_CASE("single-interval filter at the optimum stays multimodal") {
  const double gamma = 0.1;
  const double tau = optimal_tau(1.0, 0, gamma, {0, 12}, 1200).first;
  const auto prior = PosteriorGrid::uniform(0, 2.5, 501);
  const std::size_t n = static_cast<std::size_t>(100 / tau);
  const auto t = simulate_trajectory(two_level_model(1, 0, gamma, 0), basis(), tau, n, 3, 0);
  const auto post = run_filter(t.record, prior, rabi_family({1, 0, gamma, 0}), basis(), {{tau, n}}).back();
  const auto stats = posterior_stats(post);

  // Exhaustive local-maximum scan as the reference.
  const auto& w = post.weights();
  const double top = *std::max_element(w.begin(), w.end());
  std::vector<double> peaks;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool left = i == 0 || w[i] > w[i - 1];
    const bool right = i + 1 == w.size() || w[i] >= w[i + 1];
    if (left && right && w[i] >= 0.1 * top) peaks.push_back(post.candidates()[i]);
  }
  CHECK(stats.peaks == peaks);
  CHECK(stats.peaks.size() >= 2);
}

TEST_CASE("ambiguous candidates") {
  const double tau = 1.3;
  const auto c = ambiguous_candidates(pi / 2 / tau, 0.0, tau, 10 / tau);
  REQUIRE(c.size() == 2);
  CHECK(c[0] * tau == doctest::Approx(1.5 * pi));
  CHECK(c[1] * tau == doctest::Approx(2.5 * pi));

  const double omega0 = 1.0, omega_max = 2.5, gamma = 0.1;
  const double bound = 2 * pi / (std::hypot(omega_max, gamma) + std::hypot(omega0, gamma));
  CHECK(ambiguous_candidates(omega0, gamma, 0.99 * bound, omega_max).empty());
  CHECK_FALSE(ambiguous_candidates(omega0, gamma, 1.01 * bound, omega_max).empty());

  // Strong dephasing removes the lower n = 1 branch.
  const auto strong = ambiguous_candidates(1.0, 5.0, 1.0, 50.0);
  const double lower = 2 * pi - std::hypot(1.0, 5.0);
  CHECK(lower < 5.0);
  for (double w : strong) CHECK(std::abs(std::hypot(w, 5.0) - lower) > 1e-9);

  // Aliased candidates reproduce the ground-state column when Ω >> γ.
  const double g_small = 1e-7, t_opt = 4.83;
  for (double w : ambiguous_candidates(1.0, g_small, t_opt, 2.5)) {
    const auto k_true = transition_kernel(two_level_model(1.0, 0, g_small, 0), basis(), t_opt);
    const auto k_alias = transition_kernel(two_level_model(w, 0, g_small, 0), basis(), t_opt);
    CHECK(std::abs(k_true(0, 0) - k_alias(0, 0)) < 1e-6);
    CHECK(std::abs(k_true(1, 0) - k_alias(1, 0)) < 1e-6);
  }
}

TEST_CASE("trace distance") {
  const auto g = DensityOperator::basis_state(2, 0), e = DensityOperator::basis_state(2, 1);
  CHECK(state_distance(g, g) == 0.0);
  CHECK(state_distance(g, e) == doctest::Approx(2.0));
  CHECK_THROWS_AS(state_distance(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)),
                  DimensionMismatch);
  // Resonant closed evolution: trace distance exceeds 2|Δρ_gg| once the
  // coherences differ, and they agree for populations-only differences.
  const auto a = propagate(two_level_model(1.0, 0, 0, 0), g, 1.0);
  const auto b = propagate(two_level_model(1.2, 0, 0, 0), g, 1.0);
  const double pop = 2 * std::abs(a.matrix()(0, 0).real() - b.matrix()(0, 0).real());
  CHECK(state_distance(a, b) >= pop - 1e-12);
  ComplexMatrix da = ComplexMatrix::Zero(2, 2), db = ComplexMatrix::Zero(2, 2);
  da(0, 0) = 0.7, da(1, 1) = 0.3, db(0, 0) = 0.4, db(1, 1) = 0.6;
  CHECK(state_distance(da, db) == doctest::Approx(0.6));
}

TEST_CASE("hybrid plan: dephased case against an exhaustive N search") {
  const double total = 100, gamma = 0.1;
  const auto plan = plan_hybrid(total, gamma, 1.0, 2.5);
  CHECK(plan.tau_s == doctest::Approx((2 * pi - 0.1) / (std::hypot(2.5, gamma) + std::hypot(1.0, gamma))));
  CHECK(std::abs(plan.tau_opt - 4.83) < 0.05);
  CHECK_FALSE(plan.tau_opt_capped);
  CHECK(plan.q == coarse_rule(plan.n_total, plan.distance));
  CHECK(plan.q < plan.n_total);
  CHECK(plan.duration() <= total + 1e-9);
  CHECK(plan.epsilon >= 0.5 + std::log(plan.distance) / std::log(double(plan.n_total)) - 1e-12);

  std::size_t best = 0;
  for (std::size_t n = 2; n < 1000; ++n) {
    const auto q = coarse_rule(n, plan.distance);
    if (q + 1 > n) continue;
    if (q * plan.tau_s + (n - q) * plan.tau_opt <= total + 1e-9) best = n;
  }
  CHECK(plan.n_total == best);

  // Distinguishability target: 2|ΔP| equals the trace distance up to the
  // small coherence mismatch.
  CHECK(std::abs(plan.distance - plan.trace_distance) < 1e-3);
}

TEST_CASE("hybrid plan: undamped case spends one long final interval") {
  const double total = 60.0;
  const auto plan = plan_hybrid(total, 0.0, 1.0, 2.5);
  CHECK(plan.tau_opt_capped);
  CHECK(plan.n_total == plan.q + 1);

  // Exhaustive (q, N) search maximizing the schedule's total information
  // q τs² + (N - q) τ², τ = (T - q τs)/(N - q), subject to the coarse rule.
  double best_info = -1;
  std::size_t best_q = 0, best_n = 0;
  for (std::size_t q = 1; q < 200; ++q) {
    const double rest = total - q * plan.tau_s;
    if (rest <= 0) break;
    for (std::size_t n = q + 1; n < q + 60; ++n) {
      if (q < coarse_rule(n, plan.distance)) continue;
      const double tau = rest / double(n - q);
      const double info = q * plan.tau_s * plan.tau_s + (n - q) * tau * tau;
      if (info > best_info + 1e-9) best_info = info, best_q = q, best_n = n;
    }
  }
  CHECK(plan.q == best_q);
  CHECK(plan.n_total == best_n);
  CHECK(plan.tau_opt == doctest::Approx(total - plan.q * plan.tau_s));
}

TEST_CASE("hybrid plan limits and errors") {
  const auto plan = plan_hybrid(200, 0.0, 1.0, 1.0 + 1e-9, 0.1);
  CHECK(plan.tau_s == doctest::Approx((2 * pi - 0.1) / 2.0).epsilon(1e-8));
  // With dephasing the same limit leaves no opposite-probability candidate.
  CHECK_THROWS_AS(plan_hybrid(200, 0.2, 1.0, 1.0 + 1e-9, 0.1), InvalidParameter);
  CHECK_THROWS(plan_hybrid(3.0, 0.1, 1.0, 2.5));
  CHECK_THROWS(plan_hybrid(100, 0.1, 1.0, 0.5));
  CHECK_THROWS(plan_hybrid(100, 0.1, 1.0, 2.5, 4.0));
}
