#pragma once

#include <complex>

#include <Eigen/Dense>

namespace zenoest {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Kronecker product a ⊗ b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest elementwise deviation |m - m†|.
double hermiticity_defect(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol);

bool all_finite(const ComplexMatrix& m);

/// Column-stacking vectorization: vec(A) stacks the columns of A.
ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim);

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant (degree 3, 5, 7, 9 or 13 chosen from the 1-norm).
/// Throws NumericalFailure on non-finite input or output.
ComplexMatrix expm(const ComplexMatrix& a);

/// Induced 1-norm (maximum absolute column sum).
double norm1(const ComplexMatrix& m);

/// Eigenvalues of a Hermitian matrix, ascending.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

}  // namespace zenoest
