#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zenoest/linalg.hpp"
#include "zenoest/quantum.hpp"

namespace zenoest {

/// Complete set of orthogonal rank-1 projectors with outcome labels.
class MeasurementBasis {
 public:
  MeasurementBasis(std::vector<std::string> labels, std::vector<ComplexMatrix> projectors);

  /// Projectors onto the computational basis states, labelled in order.
  static MeasurementBasis computational(std::vector<std::string> labels);
  /// {g, e} eigenbasis of the two-level model.
  static MeasurementBasis two_level();

  std::size_t size() const noexcept { return labels_.size(); }
  Eigen::Index dim() const noexcept { return projectors_.front().rows(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t k) const { return labels_.at(k); }
  const ComplexMatrix& projector(std::size_t k) const { return projectors_.at(k); }
  /// |λ_k><λ_k| as a state.
  DensityOperator state(std::size_t k) const;

  /// Throws InvalidParameter for an unknown label.
  std::size_t index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<ComplexMatrix> projectors_;
};

/// p_λ = Tr(Π_λ ρ), clipped to [0, 1].
std::vector<double> outcome_probabilities(const DensityOperator& rho,
                                          const MeasurementBasis& basis);

/// Post-measurement state Π ρ Π / P(label).
DensityOperator project(const DensityOperator& rho, const std::string& label,
                        const MeasurementBasis& basis);

/// K(m, l) = P(λ_m | λ_l; τ): probability of outcome m one interval after
/// a measurement that returned l. Columns sum to one.
struct TransitionKernel {
  RealMatrix matrix;
  double tau = 0.0;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
  double operator()(std::size_t to, std::size_t from) const {
    return matrix(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from));
  }
};

TransitionKernel transition_kernel(const LindbladModel& model, const MeasurementBasis& basis,
                                   double tau);

/// Stationary distribution π of the outcome chain (Kπ = π, Σπ = 1).
/// Throws AmbiguityError when the unit eigenspace is degenerate.
RealVector stationary_distribution(const TransitionKernel& kernel);

/// Consecutive measurements taken at a fixed interval.
struct ScheduleSegment {
  double tau = 0.0;
  std::size_t count = 0;

  bool operator==(const ScheduleSegment&) const = default;
};

using Schedule = std::vector<ScheduleSegment>;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

std::size_t schedule_length(const Schedule& schedule);
double schedule_duration(const Schedule& schedule);

/// Outcome sequence of repeated projective measurements.
/// pair_counts(from, to) counts consecutive outcome pairs (λ_{j-1}, λ_j),
/// starting from the initial label, so the counts sum to N.
struct MeasurementRecord {
  std::vector<std::string> labels;
  std::size_t initial = 0;
  std::vector<std::size_t> outcomes;
  CountMatrix pair_counts;
  Schedule schedule;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return outcomes.size(); }
  /// Interval of a single-segment record; throws for mixed schedules.
  double tau() const;
  /// Time at which measurement j (0-based) is taken: the sum of intervals 0..j.
  std::vector<double> times() const;
};

CountMatrix count_pairs(std::size_t initial, const std::vector<std::size_t>& outcomes,
                        std::size_t n_labels);

/// Populations sampled along a simulated trajectory; row i holds the
/// outcome probabilities of the conditional state at times[i].
struct PopulationSeries {
  std::vector<double> times;
  RealMatrix populations;
};

struct Trajectory {
  MeasurementRecord record;
  PopulationSeries series;
};

/// Alternates free evolution with sampled projective measurements. Each
/// interval contributes samples at k·τ/S for k = 0..S (S = samples_per_interval,
/// 0 disables the series), so the reset and the pre-measurement value share a
/// time stamp. Deterministic in the seed.
Trajectory simulate_schedule(const LindbladModel& model, const MeasurementBasis& basis,
                             const Schedule& schedule, std::uint64_t seed,
                             std::size_t samples_per_interval = 20,
                             const std::string& initial_label = "g");

Trajectory simulate_trajectory(const LindbladModel& model, const MeasurementBasis& basis,
                               double tau, std::size_t n_measurements, std::uint64_t seed,
                               std::size_t samples_per_interval = 20,
                               const std::string& initial_label = "g");

}  // namespace zenoest
