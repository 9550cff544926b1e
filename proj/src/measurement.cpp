#include "zenoest/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "zenoest/errors.hpp"
#include "zenoest/rng.hpp"

namespace zenoest {

namespace {

constexpr double kProjectorTol = 1e-12;
constexpr double kZeroProbability = 1e-14;
// Singular values of K - I below this count toward the unit eigenspace.
constexpr double kNullTol = 1e-14;

}  // namespace

MeasurementBasis::MeasurementBasis(std::vector<std::string> labels,
                                   std::vector<ComplexMatrix> projectors)
    : labels_(std::move(labels)), projectors_(std::move(projectors)) {
  if (labels_.empty() || labels_.size() != projectors_.size()) {
    throw InvalidParameter("MeasurementBasis: need one label per projector");
  }
  const Eigen::Index d = projectors_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < projectors_.size(); ++k) {
    const auto& p = projectors_[k];
    if (p.rows() != d || p.cols() != d) {
      throw DimensionMismatch("MeasurementBasis: projector " + labels_[k] +
                              " has inconsistent dimension");
    }
    if (!is_hermitian(p, kProjectorTol) || (p * p - p).cwiseAbs().maxCoeff() > kProjectorTol) {
      throw InvalidParameter("MeasurementBasis: " + labels_[k] + " is not a projector");
    }
    if (std::abs(p.trace().real() - 1.0) > kProjectorTol) {
      throw InvalidParameter("MeasurementBasis: " + labels_[k] + " is not rank one");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if ((p * projectors_[j]).cwiseAbs().maxCoeff() > kProjectorTol) {
        throw InvalidParameter("MeasurementBasis: " + labels_[j] + " and " + labels_[k] +
                               " are not orthogonal");
      }
      if (labels_[j] == labels_[k]) {
        throw InvalidParameter("MeasurementBasis: duplicate label " + labels_[k]);
      }
    }
    sum += p;
  }
  if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kProjectorTol) {
    throw InvalidParameter("MeasurementBasis: projectors do not resolve the identity");
  }
}

MeasurementBasis MeasurementBasis::computational(std::vector<std::string> labels) {
  const auto d = static_cast<Eigen::Index>(labels.size());
  std::vector<ComplexMatrix> projectors;
  for (Eigen::Index k = 0; k < d; ++k) {
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    p(k, k) = 1.0;
    projectors.push_back(std::move(p));
  }
  return MeasurementBasis(std::move(labels), std::move(projectors));
}

MeasurementBasis MeasurementBasis::two_level() {
  return computational({"g", "e"});
}

DensityOperator MeasurementBasis::state(std::size_t k) const {
  return DensityOperator(projector(k));
}

std::size_t MeasurementBasis::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw InvalidParameter("unknown outcome label '" + label + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<double> outcome_probabilities(const DensityOperator& rho,
                                          const MeasurementBasis& basis) {
  if (rho.dim() != basis.dim()) {
    throw DimensionMismatch("outcome_probabilities: state dim " + std::to_string(rho.dim()) +
                            " vs basis dim " + std::to_string(basis.dim()));
  }
  std::vector<double> p(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    p[k] = std::clamp((basis.projector(k) * rho.matrix()).trace().real(), 0.0, 1.0);
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-10) {
    throw NumericalFailure("outcome_probabilities: probabilities sum to " +
                           std::to_string(total));
  }
  return p;
}

DensityOperator project(const DensityOperator& rho, const std::string& label,
                        const MeasurementBasis& basis) {
  const std::size_t k = basis.index_of(label);
  const double p = outcome_probabilities(rho, basis)[k];
  if (p <= kZeroProbability) {
    throw InvalidParameter("project: outcome '" + label + "' has probability " +
                           std::to_string(p));
  }
  // Rank-1 projectors map every state with P > 0 onto |λ><λ|.
  return basis.state(k);
}

TransitionKernel transition_kernel(const LindbladModel& model, const MeasurementBasis& basis,
                                   double tau) {
  if (model.dim() != basis.dim()) {
    throw DimensionMismatch("transition_kernel: model and basis dimensions differ");
  }
  const Propagator prop(model, tau);
  const auto n = static_cast<Eigen::Index>(basis.size());
  TransitionKernel kernel{RealMatrix::Zero(n, n), tau, basis.labels()};
  for (Eigen::Index l = 0; l < n; ++l) {
    const auto probs = outcome_probabilities(prop.apply(basis.state(static_cast<std::size_t>(l))),
                                             basis);
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (Eigen::Index m = 0; m < n; ++m) {
      kernel.matrix(m, l) = probs[static_cast<std::size_t>(m)] / total;
    }
  }
  return kernel;
}

RealVector stationary_distribution(const TransitionKernel& kernel) {
  const Eigen::Index n = kernel.matrix.rows();
  if (n == 0 || kernel.matrix.cols() != n) {
    throw DimensionMismatch("stationary_distribution: kernel must be square");
  }
  for (Eigen::Index l = 0; l < n; ++l) {
    if (std::abs(kernel.matrix.col(l).sum() - 1.0) > 1e-12 || kernel.matrix.col(l).minCoeff() < 0.0) {
      throw InvalidParameter("stationary_distribution: kernel is not column stochastic");
    }
  }
  const RealMatrix generator = kernel.matrix - RealMatrix::Identity(n, n);
  Eigen::JacobiSVD<RealMatrix> svd(generator, Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  int nullity = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= kNullTol) ++nullity;
  }
  if (nullity != 1) {
    throw AmbiguityError("stationary_distribution: unit eigenspace has dimension " +
                             std::to_string(nullity) + "; the stationary state is not unique",
                         nullity);
  }
  RealVector pi = svd.matrixV().col(n - 1);
  pi /= pi.sum();
  if (pi.minCoeff() < -1e-10) {
    throw NumericalFailure("stationary_distribution: null vector has mixed signs");
  }
  pi = pi.cwiseMax(0.0);
  return pi / pi.sum();
}

std::size_t schedule_length(const Schedule& schedule) {
  std::size_t n = 0;
  for (const auto& seg : schedule) n += seg.count;
  return n;
}

double schedule_duration(const Schedule& schedule) {
  double t = 0.0;
  for (const auto& seg : schedule) t += seg.tau * static_cast<double>(seg.count);
  return t;
}

double MeasurementRecord::tau() const {
  if (schedule.size() != 1) {
    throw InvalidParameter("MeasurementRecord::tau: record has " +
                           std::to_string(schedule.size()) + " schedule segments");
  }
  return schedule.front().tau;
}

std::vector<double> MeasurementRecord::times() const {
  std::vector<double> t;
  t.reserve(outcomes.size());
  double now = 0.0;
  for (const auto& seg : schedule) {
    for (std::size_t j = 0; j < seg.count; ++j) {
      now += seg.tau;
      t.push_back(now);
    }
  }
  return t;
}

CountMatrix count_pairs(std::size_t initial, const std::vector<std::size_t>& outcomes,
                        std::size_t n_labels) {
  const auto n = static_cast<Eigen::Index>(n_labels);
  CountMatrix counts = CountMatrix::Zero(n, n);
  std::size_t prev = initial;
  for (const std::size_t out : outcomes) {
    if (out >= n_labels || prev >= n_labels) {
      throw InvalidParameter("count_pairs: outcome index out of range");
    }
    ++counts(static_cast<Eigen::Index>(prev), static_cast<Eigen::Index>(out));
    prev = out;
  }
  return counts;
}

Trajectory simulate_schedule(const LindbladModel& model, const MeasurementBasis& basis,
                             const Schedule& schedule, std::uint64_t seed,
                             std::size_t samples_per_interval, const std::string& initial_label) {
  if (model.dim() != basis.dim()) {
    throw DimensionMismatch("simulate_trajectory: model and basis dimensions differ");
  }
  const std::size_t n_total = schedule_length(schedule);
  if (n_total == 0) {
    throw InvalidParameter("simulate_trajectory: at least one measurement is required");
  }
  const std::size_t k_out = basis.size();
  const std::size_t initial = basis.index_of(initial_label);
  const Superoperator liouvillian = build_liouvillian(model);

  Trajectory traj;
  auto& rec = traj.record;
  rec.labels = basis.labels();
  rec.initial = initial;
  rec.schedule = schedule;
  rec.seed = seed;
  rec.outcomes.reserve(n_total);

  const std::size_t samples = samples_per_interval;
  const std::size_t rows = samples > 0 ? n_total * (samples + 1) : 0;
  traj.series.times.reserve(rows);
  traj.series.populations = RealMatrix::Zero(static_cast<Eigen::Index>(rows),
                                             static_cast<Eigen::Index>(k_out));

  Philox4x64 rng(seed);
  std::size_t current = initial;
  double t0 = 0.0;
  Eigen::Index row = 0;

  for (const auto& seg : schedule) {
    if (seg.count == 0) continue;
    if (!std::isfinite(seg.tau) || seg.tau <= 0.0) {
      throw InvalidParameter("simulate_trajectory: intervals must be positive");
    }
    // After a rank-1 projection the conditional state is a basis state, so
    // the evolved state only depends on the previous outcome. Cache it.
    const Propagator step(liouvillian, seg.tau);
    std::vector<std::vector<double>> next_probs(k_out);
    std::vector<RealMatrix> sampled(k_out);
    std::vector<Propagator> partial;
    if (samples > 0) {
      partial.reserve(samples + 1);
      for (std::size_t k = 0; k <= samples; ++k) {
        partial.emplace_back(liouvillian,
                             seg.tau * static_cast<double>(k) / static_cast<double>(samples));
      }
    }
    for (std::size_t l = 0; l < k_out; ++l) {
      const DensityOperator start = basis.state(l);
      next_probs[l] = outcome_probabilities(step.apply(start), basis);
      sampled[l] = RealMatrix(static_cast<Eigen::Index>(samples + 1),
                              static_cast<Eigen::Index>(k_out));
      for (std::size_t k = 0; k < partial.size(); ++k) {
        const auto p = outcome_probabilities(partial[k].apply(start), basis);
        for (std::size_t m = 0; m < k_out; ++m) {
          sampled[l](static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) = p[m];
        }
      }
    }

    for (std::size_t j = 0; j < seg.count; ++j) {
      if (samples > 0) {
        for (std::size_t k = 0; k <= samples; ++k) {
          traj.series.times.push_back(t0 + seg.tau * static_cast<double>(k) /
                                               static_cast<double>(samples));
          traj.series.populations.row(row++) = sampled[current].row(static_cast<Eigen::Index>(k));
        }
      }
      const auto& p = next_probs[current];
      const double u = rng.uniform();
      std::size_t outcome = k_out - 1;
      double cumulative = 0.0;
      for (std::size_t m = 0; m < k_out; ++m) {
        cumulative += p[m];
        if (u < cumulative) {
          outcome = m;
          break;
        }
      }
      // A zero-probability outcome can only be reached through round-off in
      // the cumulative sum; fall back to the last outcome with weight.
      while (p[outcome] <= 0.0 && outcome > 0) --outcome;
      rec.outcomes.push_back(outcome);
      current = outcome;
      t0 += seg.tau;
    }
  }
  rec.pair_counts = count_pairs(initial, rec.outcomes, k_out);
  return traj;
}

Trajectory simulate_trajectory(const LindbladModel& model, const MeasurementBasis& basis,
                               double tau, std::size_t n_measurements, std::uint64_t seed,
                               std::size_t samples_per_interval, const std::string& initial_label) {
  if (n_measurements == 0) {
    throw InvalidParameter("simulate_trajectory: N must be >= 1");
  }
  return simulate_schedule(model, basis, {{tau, n_measurements}}, seed, samples_per_interval,
                           initial_label);
}

}  // namespace zenoest
