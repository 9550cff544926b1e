#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "zenoest/errors.hpp"
#include "zenoest/linalg.hpp"
#include "zenoest/quantum.hpp"

using namespace zenoest;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, int n, double norm) {
  std::normal_distribution<double> nd;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {nd(rng), nd(rng)};
  return m * (norm / norm1(m));
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("expm agrees with a long-double Taylor oracle") {
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 3, 4, 9}) {
    for (double norm : {1e-8, 1e-3, 0.1, 0.9, 2.5, 6.0, 15.0, 40.0}) {
      const ComplexMatrix a = random_matrix(rng, n, norm);
      const ComplexMatrix want = oracle::taylor_expm(a);
      const double scale = std::max(1.0, max_abs(want));
      CHECK(max_abs(expm(a) - want) / scale < 1e-12);
    }
  }
}

TEST_CASE("expm of Liouvillians matches the oracle") {
  for (double gamma : {0.0, 0.3, 1.0, 4.0}) {
    const auto model = two_level_model(1.0, 0.4, gamma, 0.2);
    const ComplexMatrix l = build_liouvillian(model).matrix();
    for (double t : {0.01, 1.0, 7.5, 40.0}) {
      const ComplexMatrix want = oracle::taylor_expm(l * t);
      CHECK(max_abs(expm(l * t) - want) < 1e-12);
    }
  }
}

TEST_CASE("expm edge cases") {
  CHECK(max_abs(expm(ComplexMatrix::Zero(3, 3)) - ComplexMatrix::Identity(3, 3)) == 0.0);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = Complex(0, 1.5);
  const ComplexMatrix e = expm(d);
  CHECK(std::abs(e(0, 0) - std::exp(2.0)) < 1e-13 * std::exp(2.0));
  CHECK(std::abs(e(1, 1) - std::exp(Complex(0, 1.5))) < 1e-14);
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(expm(bad), NumericalFailure);
}

TEST_CASE("column-stacking convention: vec(A X B) = (B^T kron A) vec X") {
  std::mt19937_64 rng(3);
  const ComplexMatrix a = random_matrix(rng, 3, 1.0);
  const ComplexMatrix x = random_matrix(rng, 3, 1.0);
  const ComplexMatrix b = random_matrix(rng, 3, 1.0);
  const ComplexVector lhs = vectorize(a * x * b);
  const ComplexVector rhs = kron(b.transpose(), a) * vectorize(x);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
  // Column stacking: element (1, 0) is the second entry.
  CHECK(vectorize(x)(1) == x(1, 0));
  CHECK((unvectorize(vectorize(x), 3) - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hermiticity helpers") {
  ComplexMatrix h(2, 2);
  h << 1.0, Complex(0, 2), Complex(0, -2), -1.0;
  CHECK(is_hermitian(h, 1e-15));
  h(0, 1) += 1e-9;
  CHECK_FALSE(is_hermitian(h, 1e-12));
  CHECK(hermiticity_defect(h) > 0.0);
  const RealVector ev = hermitian_eigenvalues(ComplexMatrix::Identity(2, 2) * 3.0);
  CHECK(ev(0) == doctest::Approx(3.0));
}
