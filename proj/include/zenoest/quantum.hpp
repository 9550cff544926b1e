#pragma once

#include <vector>

#include "zenoest/linalg.hpp"

namespace zenoest {

/// Hermitian, unit-trace, positive semidefinite matrix. Construction
/// validates all three properties, so a DensityOperator is always a state.
class DensityOperator {
 public:
  static constexpr double kHermiticityTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigenvalueFloor = -1e-10;

  explicit DensityOperator(ComplexMatrix matrix);

  /// |k><k| in a dim-dimensional space.
  static DensityOperator basis_state(Eigen::Index dim, Eigen::Index k);
  static DensityOperator maximally_mixed(Eigen::Index dim);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return matrix_(i, j); }

  double purity() const;

 private:
  struct Trusted {};
  DensityOperator(ComplexMatrix matrix, Trusted) : matrix_(std::move(matrix)) {}

  ComplexMatrix matrix_;

  friend class Propagator;
};

/// Hamiltonian (angular-frequency units, hbar = 1) plus collapse operators
/// already weighted by the square root of their rates.
class LindbladModel {
 public:
  LindbladModel(ComplexMatrix hamiltonian, std::vector<ComplexMatrix> collapse_ops = {});

  const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<ComplexMatrix>& collapse_ops() const noexcept { return collapse_ops_; }
  Eigen::Index dim() const noexcept { return hamiltonian_.rows(); }
  bool is_closed() const noexcept { return collapse_ops_.empty(); }

 private:
  ComplexMatrix hamiltonian_;
  std::vector<ComplexMatrix> collapse_ops_;
};

/// dim² x dim² generator acting on column-stacked density matrices,
/// vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ).
class Superoperator {
 public:
  Superoperator(ComplexMatrix matrix, Eigen::Index dim);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return dim_; }

  /// Applies the superoperator to an operator given as a dim x dim matrix.
  ComplexMatrix apply(const ComplexMatrix& op) const;

 private:
  ComplexMatrix matrix_;
  Eigen::Index dim_;
};

/// Resonant or detuned two-level drive in the rotating frame, with optional
/// σ_z dephasing and σ_- decay. Basis order is |g> = 0, |e> = 1.
struct TwoLevelParams {
  double omega = 1.0;
  double delta = 0.0;
  double gamma = 0.0;
  double gamma_spont = 0.0;
};

inline constexpr Eigen::Index kGround = 0;
inline constexpr Eigen::Index kExcited = 1;

LindbladModel two_level_model(double omega, double delta, double gamma, double gamma_spont);
inline LindbladModel two_level_model(const TwoLevelParams& p) {
  return two_level_model(p.omega, p.delta, p.gamma, p.gamma_spont);
}

Superoperator build_liouvillian(const LindbladModel& model);

/// exp(L t) for a fixed model and duration, reusable across states.
class Propagator {
 public:
  static constexpr double kTraceDriftTol = 1e-9;

  Propagator(const LindbladModel& model, double t);
  Propagator(const Superoperator& liouvillian, double t);

  double duration() const noexcept { return t_; }
  Eigen::Index dim() const noexcept { return dim_; }
  const ComplexMatrix& matrix() const noexcept { return map_; }

  /// Evolved state, Hermitized; the trace is renormalized when it drifted by
  /// less than kTraceDriftTol and NumericalFailure is thrown otherwise.
  DensityOperator apply(const DensityOperator& rho) const;

 private:
  ComplexMatrix map_;
  Eigen::Index dim_;
  double t_;
};

DensityOperator propagate(const LindbladModel& model, const DensityOperator& rho, double t);

}  // namespace zenoest
