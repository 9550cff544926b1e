#pragma once

#include <cstdint>
#include <vector>

#include "zenoest/fisher.hpp"
#include "zenoest/measurement.hpp"

namespace zenoest {

/// Normalized weights over a strictly increasing candidate lattice.
class PosteriorGrid {
 public:
  PosteriorGrid(std::vector<double> candidates, std::vector<double> weights);

  /// Flat prior over n points spanning [lo, hi].
  static PosteriorGrid uniform(double lo, double hi, std::size_t n);

  const std::vector<double>& candidates() const noexcept { return candidates_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return candidates_.size(); }
  double weight_at(std::size_t i) const { return weights_.at(i); }
  /// Index of the candidate closest to theta.
  std::size_t nearest(double theta) const;

 private:
  std::vector<double> candidates_;
  std::vector<double> weights_;
};

/// Multiplies each weight by K_i(outcome | prev) and renormalizes; falls back
/// to log-domain accumulation when the unnormalized mass underflows.
/// Throws ImpossibleRecord when every candidate gives zero likelihood.
PosteriorGrid bayes_update(const PosteriorGrid& posterior,
                           const std::vector<TransitionKernel>& kernels, std::size_t prev,
                           std::size_t outcome);

/// Posterior after every measurement; element 0 is the prior. Kernels are
/// built once per (candidate, τ) and segments of the schedule are consumed
/// in order.
std::vector<PosteriorGrid> run_filter(const MeasurementRecord& record, const PosteriorGrid& prior,
                                      const ModelFamily& family, const MeasurementBasis& basis,
                                      const Schedule& schedule);

struct PosteriorStats {
  double map = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  /// Candidate values at local maxima holding at least 10% of the peak weight.
  std::vector<double> peaks;
};

PosteriorStats posterior_stats(const PosteriorGrid& posterior);

/// Rabi frequencies Ω ∈ (0, Ω_max], Ω ≠ Ω0, with
/// √(Ω² + γ²) τ = 2nπ ± √(Ω0² + γ²) τ for n >= 1, ascending.
std::vector<double> ambiguous_candidates(double omega0, double gamma, double tau,
                                         double omega_max);

/// Trace norm ||ρ_a - ρ_b||_1.
double state_distance(const ComplexMatrix& rho_a, const ComplexMatrix& rho_b);
inline double state_distance(const DensityOperator& a, const DensityOperator& b) {
  return state_distance(a.matrix(), b.matrix());
}

/// Coarse-then-optimal measurement schedule.
struct HybridPlan {
  std::size_t q = 0;
  double tau_s = 0.0;
  double tau_opt = 0.0;
  std::size_t n_total = 0;
  double epsilon = 0.0;
  /// Distinguishability target: twice the P(g|g) gap between Ω0 and the
  /// opposite-probability candidate at τ_s.
  double distance = 0.0;
  /// Exact trace distance between the same two states, for reference.
  double trace_distance = 0.0;
  double eta = 0.0;
  double total_time = 0.0;
  /// Ω producing P(g|g) ≈ 1 - P(g|g, Ω0) at τ_s.
  double opposite_omega = 0.0;
  int iterations = 0;
  /// τ_opt sat at the edge of its search range and was capped.
  bool tau_opt_capped = false;

  Schedule schedule() const { return {{tau_s, q}, {tau_opt, n_total - q}}; }
  double duration() const { return schedule_duration(schedule()); }
};

struct HybridOptions {
  /// Grid points for the τ_opt search over (0, T].
  std::size_t tau_grid_points = 4000;
  int max_iterations = 100;
};

HybridPlan plan_hybrid(double total_time, double gamma, double omega0_guess, double omega_max,
                       double eta = 0.1, HybridOptions opts = {});

}  // namespace zenoest
