#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "zenoest/grid.hpp"
#include "zenoest/measurement.hpp"
#include "zenoest/quantum.hpp"

namespace zenoest {

/// Maps a scalar parameter value to the model it generates.
using ModelFamily = std::function<LindbladModel(double)>;

/// Family θ ↦ two_level_model with the Rabi frequency replaced by θ.
ModelFamily rabi_family(const TwoLevelParams& base);

struct DerivativeOptions {
  /// Central-difference step; 0 selects 1e-4 · max(|θ0|, scale). The
  /// Richardson step makes truncation O(h⁴), so this keeps truncation and
  /// rounding both near 1e-12 (a 1e-6 step is rounding-bound at ~1e-9).
  double step = 0.0;
  double scale = 1.0;
};

/// Fisher information per measurement of a record taken at interval τ:
///   Σ_lm (∂θ K(m,l))² / K(m,l) · π_l
/// with π the stationary distribution of K and ∂θ from a central difference
/// with one Richardson refinement. Entries with K < 1e-12 are dropped when
/// |∂K| < 1e-9 and raise DivergentInformation otherwise.
double fisher_general(const ModelFamily& family, double theta0, const MeasurementBasis& basis,
                      double tau, DerivativeOptions opts = {});

/// Central difference with one Richardson step applied to a kernel family.
RealMatrix kernel_derivative(const ModelFamily& family, double theta0,
                             const MeasurementBasis& basis, double tau, double step);

/// Binomial Fisher information dp² / (p (1 - p)).
double fisher_binary(double p, double dp);

/// Closed-form P(g|g; τ) for the two-level model. Supports γ = 0 (any δ) or
/// δ = 0 (any γ, including the critical and overdamped regimes).
double analytic_pgg(double omega, double delta, double gamma, double tau);

/// ∂P(g|g)/∂Ω from the same closed forms.
double analytic_dpgg_domega(double omega, double delta, double gamma, double tau);

/// Closed-form Fisher information per measurement for Ω.
double analytic_fisher(double omega, double delta, double gamma, double tau);

/// Strong-driving approximation of the Fisher information per unit time,
/// τ e^{-2γτ} sin²ωτ / (1 - e^{-2γτ} cos²ωτ).
double strong_drive_fisher_rate(double omega, double gamma, double tau);

/// Short-time survival expansion P0 ≈ 1 + aτ + bτ².
struct ZenoCoefficients {
  double a = 0.0;
  double b = 0.0;

  /// Inverse Zeno time -τ b.
  double zeno_rate(double tau) const { return -tau * b; }
};

ZenoCoefficients zeno_coefficients(const LindbladModel& model, const DensityOperator& rho0);

/// ∂θ of (a, b) by central difference over a model family.
ZenoCoefficients zeno_coefficient_derivatives(const ModelFamily& family, double theta0,
                                              const DensityOperator& rho0,
                                              DerivativeOptions opts = {});

/// [(∂a)²τ² + 2(∂a)(∂b)τ³ + (∂b)²τ⁴] / |aτ + (a² + b)τ²|. Throws OutOfRegime
/// unless |a|τ + |b|τ² < 0.1.
double short_tau_fisher(const ZenoCoefficients& coeffs, const ZenoCoefficients& dcoeffs,
                        double tau);

/// Fisher information per measurement for Ω in the two-level model: the
/// closed form when one exists, fisher_general otherwise.
double rabi_fisher_per_measurement(const TwoLevelParams& params, double tau);

struct FisherScan {
  std::vector<double> tau_grid;
  std::vector<double> per_measurement;
  std::vector<double> per_time;
  double optimal_tau = 0.0;
  double optimal_value = 0.0;
};

/// F/N and F/T for Ω over a τ grid; the optimum is the best grid point.
FisherScan fisher_scan(const TwoLevelParams& params, const std::vector<double>& tau_grid);

/// Global maximum of F/T over (lo, hi] on a grid of grid_points, refined by
/// golden-section search to relative τ tolerance 1e-6. Ties go to smaller τ.
std::pair<double, double> optimal_tau(double omega, double delta, double gamma,
                                      std::pair<double, double> tau_range,
                                      std::size_t grid_points);

struct SensitivityProfile {
  std::vector<double> difference_quotient_sq;
  std::vector<double> differential_quotient_sq;
};

/// Squared difference quotient [P(Ω2) - P(Ω1)]/(Ω2 - Ω1) and squared
/// derivative ∂Ω P at Ω1, over the time grid.
SensitivityProfile sensitivity_profile(double omega1, double omega2, double delta, double gamma,
                                       const std::vector<double>& t_grid);

}  // namespace zenoest
