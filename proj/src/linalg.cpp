#include "zenoest/linalg.hpp"

#include <array>
#include <cmath>
#include <string>

#include "zenoest/errors.hpp"

namespace zenoest {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

ComplexVector vectorize(const ComplexMatrix& m) {
  // Eigen storage is column-major, so a flat copy is column stacking.
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) {
    throw DimensionMismatch("unvectorize: vector of length " + std::to_string(v.size()) +
                            " cannot be reshaped to " + std::to_string(dim) + "x" +
                            std::to_string(dim));
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

double norm1(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("hermitian_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues();
}

namespace {

// Padé coefficients and the 1-norm thresholds below which a degree-m
// approximant is accurate to unit roundoff (Higham 2005, Table 2.3).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
ComplexMatrix pade_low(const ComplexMatrix& a, const std::array<double, N>& c) {
  // Degrees 3..9: U = A * sum_odd c_k A^{k-1}, V = sum_even c_k A^k.
  const Eigen::Index n = a.rows();
  const ComplexMatrix ident = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix power = ident;
  ComplexMatrix u_inner = ComplexMatrix::Zero(n, n);
  ComplexMatrix v = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k + 1 < N; k += 2) {
    v += c[k] * power;
    u_inner += c[k + 1] * power;
    power = power * a2;
  }
  const ComplexMatrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

ComplexMatrix pade13(const ComplexMatrix& a) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const ComplexMatrix ident = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
           b[1] * ident);
  const ComplexMatrix v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
      b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("expm: matrix must be square");
  }
  if (!a.allFinite()) {
    throw NumericalFailure("expm: input has non-finite entries");
  }
  if (a.size() == 0) return a;

  const double norm = norm1(a);
  ComplexMatrix result;
  if (norm <= kTheta3) {
    result = pade_low(a, kPade3);
  } else if (norm <= kTheta5) {
    result = pade_low(a, kPade5);
  } else if (norm <= kTheta7) {
    result = pade_low(a, kPade7);
  } else if (norm <= kTheta9) {
    result = pade_low(a, kPade9);
  } else {
    const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    const ComplexMatrix scaled = a / std::ldexp(1.0, squarings);
    result = pade13(scaled);
    for (int i = 0; i < squarings; ++i) result = result * result;
  }
  if (!result.allFinite()) {
    throw NumericalFailure("expm: scaling and squaring produced non-finite entries");
  }
  return result;
}

}  // namespace zenoest
