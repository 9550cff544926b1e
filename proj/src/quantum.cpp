#include "zenoest/quantum.hpp"

#include <cmath>
#include <string>

#include "zenoest/errors.hpp"

namespace zenoest {

namespace {

std::string dims(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw DimensionMismatch("DensityOperator: matrix must be square and non-empty, got " +
                            dims(matrix_.rows(), matrix_.cols()));
  }
  if (!matrix_.allFinite()) {
    throw InvalidParameter("DensityOperator: non-finite entries");
  }
  if (!is_hermitian(matrix_, kHermiticityTol)) {
    throw InvalidParameter("DensityOperator: matrix is not Hermitian");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    throw InvalidParameter("DensityOperator: trace " + std::to_string(tr.real()) + " != 1");
  }
  if (hermitian_eigenvalues(matrix_).minCoeff() < kEigenvalueFloor) {
    throw InvalidParameter("DensityOperator: matrix is not positive semidefinite");
  }
}

DensityOperator DensityOperator::basis_state(Eigen::Index dim, Eigen::Index k) {
  if (dim <= 0 || k < 0 || k >= dim) {
    throw InvalidParameter("basis_state: index " + std::to_string(k) + " out of range for dim " +
                           std::to_string(dim));
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityOperator(std::move(m), Trusted{});
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  if (dim <= 0) throw InvalidParameter("maximally_mixed: dim must be positive");
  return DensityOperator(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim),
                         Trusted{});
}

double DensityOperator::purity() const {
  return (matrix_ * matrix_).trace().real();
}

LindbladModel::LindbladModel(ComplexMatrix hamiltonian, std::vector<ComplexMatrix> collapse_ops)
    : hamiltonian_(std::move(hamiltonian)), collapse_ops_(std::move(collapse_ops)) {
  if (hamiltonian_.rows() == 0 || hamiltonian_.rows() != hamiltonian_.cols()) {
    throw DimensionMismatch("LindbladModel: Hamiltonian must be square, got " +
                            dims(hamiltonian_.rows(), hamiltonian_.cols()));
  }
  if (!hamiltonian_.allFinite() || !is_hermitian(hamiltonian_, 1e-12)) {
    throw InvalidParameter("LindbladModel: Hamiltonian must be finite and Hermitian");
  }
  for (std::size_t k = 0; k < collapse_ops_.size(); ++k) {
    const auto& c = collapse_ops_[k];
    if (c.rows() != hamiltonian_.rows() || c.cols() != hamiltonian_.cols()) {
      throw DimensionMismatch("LindbladModel: collapse operator " + std::to_string(k) + " is " +
                              dims(c.rows(), c.cols()) + ", Hamiltonian is " +
                              dims(hamiltonian_.rows(), hamiltonian_.cols()));
    }
    if (!c.allFinite()) {
      throw InvalidParameter("LindbladModel: collapse operator " + std::to_string(k) +
                             " has non-finite entries");
    }
  }
}

Superoperator::Superoperator(ComplexMatrix matrix, Eigen::Index dim)
    : matrix_(std::move(matrix)), dim_(dim) {
  if (matrix_.rows() != dim * dim || matrix_.cols() != dim * dim) {
    throw DimensionMismatch("Superoperator: expected " + dims(dim * dim, dim * dim) + ", got " +
                            dims(matrix_.rows(), matrix_.cols()));
  }
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& op) const {
  if (op.rows() != dim_ || op.cols() != dim_) {
    throw DimensionMismatch("Superoperator::apply: operand is " + dims(op.rows(), op.cols()) +
                            ", expected " + dims(dim_, dim_));
  }
  return unvectorize(matrix_ * vectorize(op), dim_);
}

LindbladModel two_level_model(double omega, double delta, double gamma, double gamma_spont) {
  if (!std::isfinite(omega) || !std::isfinite(delta) || !std::isfinite(gamma) ||
      !std::isfinite(gamma_spont)) {
    throw InvalidParameter("two_level_model: parameters must be finite");
  }
  if (omega < 0.0) throw InvalidParameter("two_level_model: Rabi frequency must be >= 0");
  if (gamma < 0.0) throw InvalidParameter("two_level_model: dephasing rate must be >= 0");
  if (gamma_spont < 0.0) throw InvalidParameter("two_level_model: decay rate must be >= 0");

  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(kExcited, kExcited) = -delta;
  h(kExcited, kGround) = omega / 2.0;
  h(kGround, kExcited) = omega / 2.0;

  std::vector<ComplexMatrix> ops;
  if (gamma > 0.0) {
    ComplexMatrix sz = ComplexMatrix::Zero(2, 2);
    sz(kExcited, kExcited) = 1.0;
    sz(kGround, kGround) = -1.0;
    ops.push_back(std::sqrt(gamma) * sz);
  }
  if (gamma_spont > 0.0) {
    ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
    lower(kGround, kExcited) = 1.0;
    ops.push_back(std::sqrt(gamma_spont) * lower);
  }
  return LindbladModel(std::move(h), std::move(ops));
}

Superoperator build_liouvillian(const LindbladModel& model) {
  const Eigen::Index d = model.dim();
  const ComplexMatrix ident = ComplexMatrix::Identity(d, d);
  const ComplexMatrix& h = model.hamiltonian();
  const Complex i_unit(0.0, 1.0);

  // -i[H, ρ] = -i(H ρ I - I ρ H)
  ComplexMatrix gen = -i_unit * (kron(ident, h) - kron(h.transpose(), ident));
  for (const auto& c : model.collapse_ops()) {
    const ComplexMatrix cdc = c.adjoint() * c;
    gen += kron(c.conjugate(), c);
    gen -= 0.5 * kron(ident, cdc);
    gen -= 0.5 * kron(cdc.transpose(), ident);
  }
  return Superoperator(std::move(gen), d);
}

Propagator::Propagator(const LindbladModel& model, double t)
    : Propagator(build_liouvillian(model), t) {}

Propagator::Propagator(const Superoperator& liouvillian, double t)
    : dim_(liouvillian.dim()), t_(t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw InvalidParameter("propagate: duration must be finite and >= 0, got " +
                           std::to_string(t));
  }
  const Eigen::Index n = liouvillian.matrix().rows();
  map_ = t == 0.0 ? ComplexMatrix::Identity(n, n).eval() : expm(liouvillian.matrix() * t);
}

DensityOperator Propagator::apply(const DensityOperator& rho) const {
  if (rho.dim() != dim_) {
    throw DimensionMismatch("propagate: state has dim " + std::to_string(rho.dim()) +
                            ", model has dim " + std::to_string(dim_));
  }
  if (t_ == 0.0) return rho;
  ComplexMatrix out = unvectorize(map_ * vectorize(rho.matrix()), dim_);
  out = (0.5 * (out + out.adjoint())).eval();
  const double tr = out.trace().real();
  if (!std::isfinite(tr) || std::abs(tr - 1.0) >= kTraceDriftTol) {
    throw NumericalFailure("propagate: trace drifted to " + std::to_string(tr) +
                           "; the model is not trace preserving");
  }
  out /= tr;
  if (hermitian_eigenvalues(out).minCoeff() < DensityOperator::kEigenvalueFloor) {
    throw NumericalFailure("propagate: evolved state lost positivity");
  }
  return DensityOperator(std::move(out), DensityOperator::Trusted{});
}

DensityOperator propagate(const LindbladModel& model, const DensityOperator& rho, double t) {
  return Propagator(model, t).apply(rho);
}

}  // namespace zenoest
