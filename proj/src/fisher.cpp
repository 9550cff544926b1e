#include "zenoest/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zenoest/errors.hpp"

namespace zenoest {

namespace {

constexpr double kKernelFloor = 1e-12;
constexpr double kDerivativeFloor = 1e-9;
constexpr double kCriticalPggTol = 1e-8;
constexpr double kCriticalFisherTol = 1e-6;

double default_step(double theta0, const DerivativeOptions& opts) {
  if (opts.step > 0.0) return opts.step;
  return 1e-4 * std::max(std::abs(theta0), opts.scale);
}

template <typename F>
auto richardson(const F& f, double x, double h) {
  const auto d1 = ((f(x + h) - f(x - h)) / (2.0 * h)).eval();
  const auto d2 = ((f(x + 0.5 * h) - f(x - 0.5 * h)) / h).eval();
  return ((4.0 * d2 - d1) / 3.0).eval();
}

double richardson_scalar(const std::function<double(double)>& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

// Damped-oscillator pieces of the resonant dephased solution as entire
// functions of u = Ω² - γ²: C = cos(√u τ), S = sin(√u τ)/√u and dS/du.
// Negative u continues to cosh/sinh; |u|τ² < 1 uses the power series.
struct Oscillator {
  double c;
  double s;
  double ds_du;
};

Oscillator oscillator(double u, double tau) {
  const double x = u * tau * tau;
  if (std::abs(x) < 1.0) {
    double c = 0.0;
    double s = 0.0;
    double ds = 0.0;
    double term_c = 1.0;          // (-x)^k / (2k)!
    double term_s = 1.0;          // (-x)^k / (2k+1)!
    double term_ds = -1.0 / 6.0;  // (k+1) (-1)^(k+1) x^k / (2k+3)!
    for (int k = 0; k < 25; ++k) {
      c += term_c;
      s += term_s;
      ds += term_ds;
      term_c *= -x / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
      term_s *= -x / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
      term_ds *= -x * (k + 2.0) / ((k + 1.0) * (2.0 * k + 4.0) * (2.0 * k + 5.0));
    }
    return {c, tau * s, tau * tau * tau * ds};
  }
  double c;
  double s;
  if (u > 0.0) {
    const double w = std::sqrt(u);
    c = std::cos(w * tau);
    s = std::sin(w * tau) / w;
  } else {
    const double k = std::sqrt(-u);
    c = std::cosh(k * tau);
    s = std::sinh(k * tau) / k;
  }
  return {c, s, (tau * c - s) / (2.0 * u)};
}

void require_closed_form(double omega, double delta, double gamma, double tau, const char* who) {
  if (!(omega >= 0.0) || !(gamma >= 0.0) || !std::isfinite(delta) || !(tau >= 0.0) ||
      !std::isfinite(omega) || !std::isfinite(gamma) || !std::isfinite(tau)) {
    throw InvalidParameter(std::string(who) + ": need Ω >= 0, γ >= 0, τ >= 0 and finite δ");
  }
  if (delta != 0.0 && gamma != 0.0) {
    throw UnsupportedClosedForm(std::string(who) +
                                ": no closed form with both detuning and dephasing; use "
                                "propagate or fisher_general");
  }
}

double dephased_pgg(double omega, double gamma, double tau) {
  if (omega == 0.0) return 1.0;
  if (std::abs(omega - gamma) / omega < kCriticalPggTol) {
    return 0.5 + 0.5 * std::exp(-omega * tau) * (omega * tau + 1.0);
  }
  const Oscillator o = oscillator(omega * omega - gamma * gamma, tau);
  return 0.5 + 0.5 * std::exp(-gamma * tau) * (gamma * o.s + o.c);
}

double dephased_dpgg(double omega, double gamma, double tau) {
  const Oscillator o = oscillator(omega * omega - gamma * gamma, tau);
  return std::exp(-gamma * tau) * omega * (gamma * o.ds_du - 0.5 * tau * o.s);
}

// Eq. for the dephased Fisher information, oscillatory (Ω > γ) regime.
double dephased_fisher_underdamped(double omega, double gamma, double tau) {
  const double w = std::sqrt(omega * omega - gamma * gamma);
  const double wt = w * tau;
  const double x = gamma * w * tau * std::cos(wt) - (gamma + w * w * tau) * std::sin(wt);
  const double den = std::pow(w, 4) * (omega * omega - 2.0 * w * w * std::exp(2.0 * gamma * tau) +
                                       (w * w - gamma * gamma) * std::cos(2.0 * wt) +
                                       2.0 * gamma * w * std::sin(2.0 * wt));
  return -2.0 * omega * omega * x * x / den;
}

// The same expression continued to Ω < γ through ω = iκ.
double dephased_fisher_overdamped(double omega, double gamma, double tau) {
  const double k = std::sqrt(gamma * gamma - omega * omega);
  const double kt = k * tau;
  const double y = gamma * k * tau * std::cosh(kt) - (gamma - k * k * tau) * std::sinh(kt);
  const double den = std::pow(k, 4) * (omega * omega + 2.0 * k * k * std::exp(2.0 * gamma * tau) -
                                       (k * k + gamma * gamma) * std::cosh(2.0 * kt) -
                                       2.0 * gamma * k * std::sinh(2.0 * kt));
  return 2.0 * omega * omega * y * y / den;
}

}  // namespace

ModelFamily rabi_family(const TwoLevelParams& base) {
  return [base](double omega) {
    TwoLevelParams p = base;
    p.omega = omega;
    return two_level_model(p);
  };
}

RealMatrix kernel_derivative(const ModelFamily& family, double theta0,
                             const MeasurementBasis& basis, double tau, double step) {
  const auto kernel_at = [&](double theta) {
    return transition_kernel(family(theta), basis, tau).matrix;
  };
  return richardson(kernel_at, theta0, step);
}

double fisher_general(const ModelFamily& family, double theta0, const MeasurementBasis& basis,
                      double tau, DerivativeOptions opts) {
  if (!(tau > 0.0)) throw InvalidParameter("fisher_general: τ must be > 0");
  const TransitionKernel kernel = transition_kernel(family(theta0), basis, tau);
  const RealVector pi = stationary_distribution(kernel);
  const RealMatrix dk = kernel_derivative(family, theta0, basis, tau, default_step(theta0, opts));

  double info = 0.0;
  const Eigen::Index n = kernel.matrix.rows();
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index m = 0; m < n; ++m) {
      const double k = kernel.matrix(m, l);
      const double d = dk(m, l);
      if (k < kKernelFloor) {
        if (std::abs(d) < kDerivativeFloor) continue;
        throw DivergentInformation("fisher_general: P(" + basis.label(static_cast<std::size_t>(m)) +
                                   "|" + basis.label(static_cast<std::size_t>(l)) +
                                   ") vanishes but its derivative is " + std::to_string(d));
      }
      info += d * d / k * pi(l);
    }
  }
  return std::max(info, 0.0);
}

double fisher_binary(double p, double dp) {
  if (!(p >= 0.0 && p <= 1.0) || !std::isfinite(dp)) {
    throw InvalidParameter("fisher_binary: p must lie in [0, 1]");
  }
  if (dp == 0.0) return 0.0;
  if (p == 0.0 || p == 1.0) {
    throw DivergentInformation("fisher_binary: p = " + std::to_string(p) +
                               " with non-zero derivative");
  }
  return dp * dp / (p * (1.0 - p));
}

double analytic_pgg(double omega, double delta, double gamma, double tau) {
  require_closed_form(omega, delta, gamma, tau, "analytic_pgg");
  if (gamma == 0.0) {
    const double chi2 = omega * omega + delta * delta;
    if (chi2 == 0.0) return 1.0;
    const double chi = std::sqrt(chi2);
    return 0.5 * (1.0 + (delta * delta + omega * omega * std::cos(chi * tau)) / chi2);
  }
  return dephased_pgg(omega, gamma, tau);
}

double analytic_dpgg_domega(double omega, double delta, double gamma, double tau) {
  require_closed_form(omega, delta, gamma, tau, "analytic_dpgg_domega");
  if (gamma == 0.0) {
    const double chi2 = omega * omega + delta * delta;
    if (chi2 == 0.0) return 0.0;
    const double chi = std::sqrt(chi2);
    const double s = std::sin(0.5 * chi * tau);
    const double c = std::cos(0.5 * chi * tau);
    return -(omega * s / (chi2 * chi2)) * (2.0 * delta * delta * s + omega * omega * chi * tau * c);
  }
  return dephased_dpgg(omega, gamma, tau);
}

double analytic_fisher(double omega, double delta, double gamma, double tau) {
  require_closed_form(omega, delta, gamma, tau, "analytic_fisher");
  if (omega == 0.0 || tau == 0.0) return 0.0;

  if (gamma == 0.0) {
    const double chi2 = omega * omega + delta * delta;
    const double chi = std::sqrt(chi2);
    const double s = std::sin(0.5 * chi * tau);
    const double c = std::cos(0.5 * chi * tau);
    const double num = omega * omega * chi * tau * c + 2.0 * delta * delta * s;
    const double den = chi2 * chi2 * (delta * delta + omega * omega * c * c);
    if (den == 0.0) return tau * tau;  // δ = 0 and cos = 0: the limit is τ².
    return num * num / den;
  }

  double f;
  if (std::abs(omega - gamma) / omega < kCriticalFisherTol) {
    f = fisher_binary(dephased_pgg(omega, gamma, tau), dephased_dpgg(omega, gamma, tau));
  } else if (omega > gamma) {
    f = dephased_fisher_underdamped(omega, gamma, tau);
  } else {
    f = dephased_fisher_overdamped(omega, gamma, tau);
  }
  if (!std::isfinite(f)) {
    // e^{2γτ} overflowed; the binomial form stays finite there.
    const double p = dephased_pgg(omega, gamma, tau);
    f = fisher_binary(p, dephased_dpgg(omega, gamma, tau));
  }
  return std::max(f, 0.0);
}

double strong_drive_fisher_rate(double omega, double gamma, double tau) {
  if (!(omega > gamma) || gamma < 0.0) {
    throw InvalidParameter("strong_drive_fisher_rate: requires Ω > γ >= 0");
  }
  if (!(tau >= 0.0)) throw InvalidParameter("strong_drive_fisher_rate: τ must be >= 0");
  const double w = std::sqrt(omega * omega - gamma * gamma);
  const double decay = std::exp(-2.0 * gamma * tau);
  const double sn = std::sin(w * tau);
  const double cs = std::cos(w * tau);
  const double den = 1.0 - decay * cs * cs;
  if (den <= 0.0) return gamma == 0.0 ? tau : 0.0;
  return tau * decay * sn * sn / den;
}

ZenoCoefficients zeno_coefficients(const LindbladModel& model, const DensityOperator& rho0) {
  if (rho0.dim() != model.dim()) {
    throw DimensionMismatch("zeno_coefficients: state and model dimensions differ");
  }
  if (rho0.purity() <= 1.0 - 1e-10) {
    throw InvalidParameter("zeno_coefficients: initial state must be pure, purity = " +
                           std::to_string(rho0.purity()));
  }
  const Superoperator gen = build_liouvillian(model);
  const ComplexMatrix once = gen.apply(rho0.matrix());
  const ComplexMatrix twice = gen.apply(once);
  ZenoCoefficients z;
  z.a = (rho0.matrix() * once).trace().real();
  z.b = 0.5 * (rho0.matrix() * twice).trace().real();

  if (model.is_closed()) {
    const ComplexMatrix& h = model.hamiltonian();
    const double mean = (rho0.matrix() * h).trace().real();
    const double mean_sq = (rho0.matrix() * h * h).trace().real();
    const double variance = mean_sq - mean * mean;
    if (std::abs(-z.b - variance) > 1e-10 * std::max(1.0, variance)) {
      throw NumericalFailure("zeno_coefficients: -b = " + std::to_string(-z.b) +
                             " disagrees with the energy variance " + std::to_string(variance));
    }
  }
  return z;
}

ZenoCoefficients zeno_coefficient_derivatives(const ModelFamily& family, double theta0,
                                              const DensityOperator& rho0,
                                              DerivativeOptions opts) {
  const double h = default_step(theta0, opts);
  ZenoCoefficients d;
  d.a = richardson_scalar([&](double t) { return zeno_coefficients(family(t), rho0).a; },
                          theta0, h);
  d.b = richardson_scalar([&](double t) { return zeno_coefficients(family(t), rho0).b; },
                          theta0, h);
  return d;
}

double short_tau_fisher(const ZenoCoefficients& coeffs, const ZenoCoefficients& dcoeffs,
                        double tau) {
  if (!(tau >= 0.0)) throw InvalidParameter("short_tau_fisher: τ must be >= 0");
  const double a = coeffs.a;
  const double b = coeffs.b;
  if (std::abs(a) * tau + std::abs(b) * tau * tau >= 0.1) {
    throw OutOfRegime("short_tau_fisher: |a|τ + |b|τ² = " +
                      std::to_string(std::abs(a) * tau + std::abs(b) * tau * tau) +
                      " is not small; use the exact kernel");
  }
  const double da = dcoeffs.a;
  const double db = dcoeffs.b;
  const double t2 = tau * tau;
  const double num = da * da * t2 + 2.0 * da * db * t2 * tau + db * db * t2 * t2;
  const double den = std::abs(a * tau + (a * a + b) * t2);
  if (den == 0.0) {
    if (num == 0.0) return 0.0;
    throw DivergentInformation("short_tau_fisher: vanishing survival loss with non-zero slope");
  }
  return num / den;
}

double rabi_fisher_per_measurement(const TwoLevelParams& params, double tau) {
  if (params.gamma_spont == 0.0 && (params.delta == 0.0 || params.gamma == 0.0)) {
    return analytic_fisher(params.omega, params.delta, params.gamma, tau);
  }
  return fisher_general(rabi_family(params), params.omega, MeasurementBasis::two_level(), tau);
}

FisherScan fisher_scan(const TwoLevelParams& params, const std::vector<double>& tau_grid) {
  FisherScan scan;
  scan.tau_grid = tau_grid;
  scan.per_measurement.reserve(tau_grid.size());
  scan.per_time.reserve(tau_grid.size());
  for (const double tau : tau_grid) {
    if (!(tau > 0.0)) throw InvalidParameter("fisher_scan: τ values must be > 0");
    const double f = rabi_fisher_per_measurement(params, tau);
    scan.per_measurement.push_back(f);
    scan.per_time.push_back(f / tau);
  }
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (i == 0 || scan.per_time[i] > scan.optimal_value) {
      scan.optimal_value = scan.per_time[i];
      scan.optimal_tau = tau_grid[i];
    }
  }
  return scan;
}

std::pair<double, double> optimal_tau(double omega, double delta, double gamma,
                                      std::pair<double, double> tau_range,
                                      std::size_t grid_points) {
  const auto [lo, hi] = tau_range;
  if (!(lo >= 0.0) || !(hi > lo)) {
    throw InvalidParameter("optimal_tau: τ range must satisfy 0 <= lo < hi");
  }
  if (grid_points < 100) throw InvalidParameter("optimal_tau: need at least 100 grid points");

  const TwoLevelParams params{omega, delta, gamma, 0.0};
  const auto rate = [&](double tau) { return rabi_fisher_per_measurement(params, tau) / tau; };

  const std::vector<double> grid = open_grid(lo, hi, grid_points);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = rate(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (!(best_value > 0.0)) {
    throw InvalidParameter("optimal_tau: the Fisher information vanishes on the whole grid");
  }

  const double a = best == 0 ? std::max(lo, 0.5 * grid[0]) : grid[best - 1];
  const double b = best + 1 == grid.size() ? hi : grid[best + 1];
  const double refined = golden_section_max(rate, a, b, 1e-6);

  // Candidates in ascending τ so that exact ties resolve to the smaller τ.
  double tau_star = a;
  double f_star = rate(a);
  for (const double t : {refined, grid[best], b}) {
    if (t <= tau_star) continue;
    const double v = rate(t);
    if (v > f_star) {
      f_star = v;
      tau_star = t;
    }
  }
  return {tau_star, f_star};
}

SensitivityProfile sensitivity_profile(double omega1, double omega2, double delta, double gamma,
                                       const std::vector<double>& t_grid) {
  if (omega1 == omega2) {
    throw InvalidParameter("sensitivity_profile: Ω1 and Ω2 must differ");
  }
  const bool closed = delta == 0.0 || gamma == 0.0;
  const MeasurementBasis basis = MeasurementBasis::two_level();
  const auto pgg = [&](double omega, double t) {
    if (closed) return analytic_pgg(omega, delta, gamma, t);
    if (t == 0.0) return 1.0;
    return transition_kernel(two_level_model(omega, delta, gamma, 0.0), basis, t).matrix(0, 0);
  };
  SensitivityProfile out;
  out.difference_quotient_sq.reserve(t_grid.size());
  out.differential_quotient_sq.reserve(t_grid.size());
  for (const double t : t_grid) {
    const double dq = (pgg(omega2, t) - pgg(omega1, t)) / (omega2 - omega1);
    double deriv;
    if (closed) {
      deriv = analytic_dpgg_domega(omega1, delta, gamma, t);
    } else {
      deriv = richardson_scalar([&](double o) { return pgg(o, t); }, omega1,
                                1e-6 * std::max(1.0, omega1));
    }
    out.difference_quotient_sq.push_back(dq * dq);
    out.differential_quotient_sq.push_back(deriv * deriv);
  }
  return out;
}

}  // namespace zenoest
