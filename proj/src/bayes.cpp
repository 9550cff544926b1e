#include "zenoest/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include "zenoest/errors.hpp"
#include "zenoest/grid.hpp"

namespace zenoest {

PosteriorGrid::PosteriorGrid(std::vector<double> candidates, std::vector<double> weights)
    : candidates_(std::move(candidates)), weights_(std::move(weights)) {
  if (candidates_.empty() || candidates_.size() != weights_.size()) {
    throw InvalidParameter("PosteriorGrid: need one weight per candidate");
  }
  for (std::size_t i = 1; i < candidates_.size(); ++i) {
    if (!(candidates_[i] > candidates_[i - 1])) {
      throw InvalidParameter("PosteriorGrid: candidates must be strictly increasing");
    }
  }
  double total = 0.0;
  for (const double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidParameter("PosteriorGrid: weights must be finite and non-negative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidParameter("PosteriorGrid: weights sum to " + std::to_string(total));
  }
}

PosteriorGrid PosteriorGrid::uniform(double lo, double hi, std::size_t n) {
  if (n < 1 || (n > 1 && !(hi > lo))) {
    throw InvalidParameter("PosteriorGrid::uniform: need n >= 1 and hi > lo");
  }
  return PosteriorGrid(linspace(lo, hi, n),
                       std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::size_t PosteriorGrid::nearest(double theta) const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates_.size(); ++i) {
    if (std::abs(candidates_[i] - theta) < std::abs(candidates_[best] - theta)) best = i;
  }
  return best;
}

PosteriorGrid bayes_update(const PosteriorGrid& posterior,
                           const std::vector<TransitionKernel>& kernels, std::size_t prev,
                           std::size_t outcome) {
  const std::size_t n = posterior.size();
  if (kernels.size() != n) {
    throw DimensionMismatch("bayes_update: " + std::to_string(kernels.size()) + " kernels for " +
                            std::to_string(n) + " candidates");
  }
  const auto& w = posterior.weights();
  std::vector<double> next(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (prev >= kernels[i].size() || outcome >= kernels[i].size()) {
      throw InvalidParameter("bayes_update: outcome index out of range");
    }
    next[i] = w[i] * kernels[i](outcome, prev);
    total += next[i];
  }
  if (total > 1e-300) {
    for (double& x : next) x /= total;
    return PosteriorGrid(posterior.candidates(), std::move(next));
  }

  // Underflow: redo the product in log space relative to its maximum.
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double max_log = kNegInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = kernels[i](outcome, prev);
    next[i] = (w[i] > 0.0 && k > 0.0) ? std::log(w[i]) + std::log(k) : kNegInf;
    max_log = std::max(max_log, next[i]);
  }
  if (max_log == kNegInf) {
    const auto& labels = kernels.front().labels;
    auto name = [&](std::size_t k) {
      return k < labels.size() ? labels[k] : "#" + std::to_string(k);
    };
    throw ImpossibleRecord("bayes_update: outcome " + name(outcome) + " after " + name(prev) +
                           " has zero likelihood for every candidate");
  }
  total = 0.0;
  for (double& x : next) {
    x = std::exp(x - max_log);
    total += x;
  }
  for (double& x : next) x /= total;
  return PosteriorGrid(posterior.candidates(), std::move(next));
}

std::vector<PosteriorGrid> run_filter(const MeasurementRecord& record, const PosteriorGrid& prior,
                                      const ModelFamily& family, const MeasurementBasis& basis,
                                      const Schedule& schedule) {
  if (schedule_length(schedule) != record.size()) {
    throw InvalidParameter("run_filter: schedule covers " +
                           std::to_string(schedule_length(schedule)) + " measurements, record has " +
                           std::to_string(record.size()));
  }
  if (!record.schedule.empty() && record.schedule != schedule) {
    throw InvalidParameter("run_filter: record was generated with a different schedule");
  }

  std::map<double, std::vector<TransitionKernel>> kernel_cache;
  const auto kernels_for = [&](double tau) -> const std::vector<TransitionKernel>& {
    auto it = kernel_cache.find(tau);
    if (it == kernel_cache.end()) {
      std::vector<TransitionKernel> ks;
      ks.reserve(prior.size());
      for (const double theta : prior.candidates()) {
        ks.push_back(transition_kernel(family(theta), basis, tau));
      }
      it = kernel_cache.emplace(tau, std::move(ks)).first;
    }
    return it->second;
  };

  std::vector<PosteriorGrid> trajectory;
  trajectory.reserve(record.size() + 1);
  trajectory.push_back(prior);
  std::size_t prev = record.initial;
  std::size_t j = 0;
  for (const auto& seg : schedule) {
    if (seg.count == 0) continue;
    const auto& ks = kernels_for(seg.tau);
    for (std::size_t c = 0; c < seg.count; ++c, ++j) {
      const std::size_t out = record.outcomes[j];
      trajectory.push_back(bayes_update(trajectory.back(), ks, prev, out));
      prev = out;
    }
  }
  return trajectory;
}

PosteriorStats posterior_stats(const PosteriorGrid& posterior) {
  const auto& x = posterior.candidates();
  const auto& w = posterior.weights();
  PosteriorStats s;
  const auto max_it = std::max_element(w.begin(), w.end());
  s.map = x[static_cast<std::size_t>(max_it - w.begin())];
  for (std::size_t i = 0; i < x.size(); ++i) s.mean += w[i] * x[i];
  for (std::size_t i = 0; i < x.size(); ++i) s.variance += w[i] * (x[i] - s.mean) * (x[i] - s.mean);
  const double threshold = 0.1 * *max_it;
  for (const std::size_t i : local_maxima(w)) {
    if (w[i] >= threshold) s.peaks.push_back(x[i]);
  }
  return s;
}

std::vector<double> ambiguous_candidates(double omega0, double gamma, double tau,
                                         double omega_max) {
  if (!(tau > 0.0)) throw InvalidParameter("ambiguous_candidates: τ must be > 0");
  if (!(omega_max > omega0)) throw InvalidParameter("ambiguous_candidates: need Ω_max > Ω0");
  const double chi0 = std::hypot(omega0, gamma);
  const double chi_max = std::hypot(omega_max, gamma);
  const double period = 2.0 * std::numbers::pi / tau;
  std::vector<double> out;
  for (int n = 1; n * period - chi0 <= chi_max; ++n) {
    for (const double sign : {-1.0, 1.0}) {
      const double chi = n * period + sign * chi0;
      if (chi <= 0.0) continue;
      const double radicand = chi * chi - gamma * gamma;
      if (radicand <= 0.0) continue;
      const double omega = std::sqrt(radicand);
      if (omega <= omega_max && std::abs(omega - omega0) > 1e-12 * std::max(1.0, omega0)) {
        out.push_back(omega);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double state_distance(const ComplexMatrix& rho_a, const ComplexMatrix& rho_b) {
  if (rho_a.rows() != rho_b.rows() || rho_a.cols() != rho_b.cols()) {
    throw DimensionMismatch("state_distance: operands have different dimensions");
  }
  const ComplexMatrix diff = rho_a - rho_b;
  return hermitian_eigenvalues(0.5 * (diff + diff.adjoint())).cwiseAbs().sum();
}

namespace {

std::size_t coarse_count(std::size_t n_total, double distance, double* epsilon) {
  const double log_n = std::log(static_cast<double>(n_total));
  const double eps = 0.5 + std::log(distance) / log_n;
  if (epsilon != nullptr) *epsilon = eps;
  const double q = std::pow(static_cast<double>(n_total), 1.0 - eps);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(q - 1e-9)));
}

}  // namespace

HybridPlan plan_hybrid(double total_time, double gamma, double omega0_guess, double omega_max,
                       double eta, HybridOptions opts) {
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw InvalidParameter("plan_hybrid: total time must be > 0");
  }
  if (!(gamma >= 0.0)) throw InvalidParameter("plan_hybrid: γ must be >= 0");
  if (!(omega0_guess > 0.0) || !(omega_max > omega0_guess)) {
    throw InvalidParameter("plan_hybrid: need 0 < Ω0 < Ω_max");
  }
  if (!(eta > 0.0 && eta < std::numbers::pi)) {
    throw InvalidParameter("plan_hybrid: η must lie in (0, π)");
  }

  HybridPlan plan;
  plan.eta = eta;
  plan.total_time = total_time;
  const double chi0 = std::hypot(omega0_guess, gamma);
  plan.tau_s = (2.0 * std::numbers::pi - eta) / (std::hypot(omega_max, gamma) + chi0);

  const double chi_opp = std::numbers::pi / plan.tau_s - chi0;
  if (!(chi_opp > gamma)) {
    throw InvalidParameter("plan_hybrid: no Rabi frequency gives opposite outcome probabilities "
                           "at τ_s");
  }
  plan.opposite_omega = std::sqrt(chi_opp * chi_opp - gamma * gamma);
  plan.distance = 2.0 * std::abs(analytic_pgg(plan.opposite_omega, 0.0, gamma, plan.tau_s) -
                                 analytic_pgg(omega0_guess, 0.0, gamma, plan.tau_s));
  {
    const DensityOperator g = DensityOperator::basis_state(2, kGround);
    plan.trace_distance =
        state_distance(propagate(two_level_model(plan.opposite_omega, 0.0, gamma, 0.0), g,
                                 plan.tau_s),
                       propagate(two_level_model(omega0_guess, 0.0, gamma, 0.0), g, plan.tau_s));
  }
  if (!(plan.distance > 0.0)) {
    throw InvalidParameter("plan_hybrid: the coarse stage cannot separate the candidates");
  }

  const auto [tau_star, rate_star] =
      optimal_tau(omega0_guess, 0.0, gamma, {0.0, total_time}, opts.tau_grid_points);
  (void)rate_star;

  if (tau_star >= total_time * (1.0 - 1e-6)) {
    // Information per time grows up to the full budget: spend a single
    // long interval after the coarse stage.
    plan.tau_opt_capped = true;
    std::size_t q = 1;
    for (int it = 0;; ++it) {
      if (it >= opts.max_iterations) {
        throw NumericalFailure("plan_hybrid: coarse count did not reach a fixed point");
      }
      const std::size_t next = coarse_count(q + 1, plan.distance, nullptr);
      plan.iterations = it + 1;
      if (next == q) break;
      q = next;
    }
    plan.q = q;
    plan.n_total = q + 1;
    coarse_count(plan.n_total, plan.distance, &plan.epsilon);
    plan.tau_opt = total_time - static_cast<double>(q) * plan.tau_s;
    if (!(plan.tau_opt > 0.0)) {
      throw InvalidParameter("plan_hybrid: total time is too short for the coarse stage");
    }
    return plan;
  }

  plan.tau_opt = tau_star;
  if (plan.tau_s + plan.tau_opt > total_time) {
    throw InvalidParameter("plan_hybrid: no feasible N >= q + 1 within the total time");
  }
  std::size_t n = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::floor(total_time / plan.tau_opt)));
  std::set<std::size_t> visited;
  for (int it = 0;; ++it) {
    if (it >= opts.max_iterations || !visited.insert(n).second) {
      throw NumericalFailure("plan_hybrid: (N, ε, q) iteration did not converge");
    }
    const std::size_t q = coarse_count(n, plan.distance, nullptr);
    const double remaining = total_time - static_cast<double>(q) * plan.tau_s;
    std::size_t next = q;
    if (remaining > 0.0) {
      next += static_cast<std::size_t>(std::floor(remaining / plan.tau_opt + 1e-12));
    }
    next = std::max<std::size_t>(next, 2);
    plan.iterations = it + 1;
    if (next == n) {
      if (n < q + 1) {
        throw InvalidParameter("plan_hybrid: no feasible N >= q + 1 within the total time");
      }
      plan.q = q;
      plan.n_total = n;
      coarse_count(n, plan.distance, &plan.epsilon);
      return plan;
    }
    n = next;
  }
}

}  // namespace zenoest
