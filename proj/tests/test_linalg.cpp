#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "mrdkit/linalg.hpp"
#include "mrdkit/rng.hpp"

using namespace mrdkit;
using mrdkit::linalg::gram_eig;
using mrdkit::linalg::ridge_solve;
using mrdkit::linalg::spectral_norm;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = rng.next_normal();
  return M;
}

}  // namespace

TEST_CASE("spectral_norm on fixed matrices") {
  CHECK(spectral_norm(Matrix::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-12));

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 2.0;
  diag(1, 1) = 1.0;
  CHECK(spectral_norm(diag) == doctest::Approx(2.0).epsilon(1e-12));

  Matrix nilpotent = Matrix::Zero(2, 2);
  nilpotent(0, 1) = 1.0;
  CHECK(spectral_norm(nilpotent) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral_norm rejects non-finite input") {
  Matrix M = Matrix::Ones(2, 2);
  M(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(spectral_norm(M), InvalidInputError);
}

TEST_CASE("spectral_norm scales homogeneously") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Matrix M = random_matrix(5, 7, seed);
    const double c = -3.7 + static_cast<double>(seed) * 0.41;
    const double lhs = spectral_norm(c * M);
    const double rhs = std::abs(c) * spectral_norm(M);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("spectral_norm is submultiplicative") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    Matrix A = random_matrix(6, 4, seed);
    Matrix B = random_matrix(4, 5, seed + 1000);
    CHECK(spectral_norm(A * B) <= spectral_norm(A) * spectral_norm(B) * (1.0 + 1e-12));
  }
}

TEST_CASE("spectral_norm power-iteration path matches SVD") {
  // min dimension 70 > 64 forces power iteration
  Matrix M = random_matrix(70, 72, 7);
  Eigen::BDCSVD<Matrix> svd(M);
  CHECK(spectral_norm(M) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-9));
}

TEST_CASE("ridge_solve identity fixtures") {
  Matrix I2 = Matrix::Identity(2, 2);
  CHECK((ridge_solve(I2, I2, 0.0) - I2).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((ridge_solve(I2, I2, 1.0) - 0.5 * I2).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ridge_solve matches a direct normal-equation solve") {
  Matrix A = random_matrix(4, 3, 42);
  Matrix B = random_matrix(4, 2, 43);
  const double lambda = 0.1;
  Matrix S = ridge_solve(A, B, lambda);

  Matrix lhs = A.transpose() * A + lambda * Matrix::Identity(3, 3);
  Matrix expected = lhs.partialPivLu().solve(A.transpose() * B);
  CHECK((S - expected).norm() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("ridge_solve residual stays below 1e-8 relative") {
  for (std::uint64_t seed = 300; seed < 310; ++seed) {
    Matrix A = random_matrix(6, 4, seed);
    Matrix B = random_matrix(6, 3, seed + 50);
    for (double lambda : {0.0, 1e-3, 1.0}) {
      Matrix S = ridge_solve(A, B, lambda);
      Matrix G = A.transpose() * A + lambda * Matrix::Identity(4, 4);
      const double rel = (G * S - A.transpose() * B).norm() / (A.transpose() * B).norm();
      CHECK(rel <= 1e-8);
    }
  }
}

TEST_CASE("ridge_solve error paths") {
  Matrix I2 = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(ridge_solve(I2, I2, -1.0), InvalidInputError);

  // rank-1 A makes A^T A singular
  Matrix A(2, 2);
  A << 1, 1, 1, 1;
  CHECK_THROWS_AS(ridge_solve(A, I2, 0.0, /*allow_pinv=*/false), SingularSystemError);

  // with the fallback the minimum-norm solution matches the pseudoinverse
  Matrix S = ridge_solve(A, I2, 0.0);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix pinv = svd.solve(I2);
  CHECK((S - pinv).norm() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("gram_eig on fixed matrices") {
  auto eig = gram_eig(Matrix::Identity(3, 3));
  CHECK(eig.eigenvalues.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(eig.eigenvalues(i) == doctest::Approx(1.0));

  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 4.0;
  D(1, 1) = 1.0;
  auto eig2 = gram_eig(D);
  CHECK(eig2.eigenvalues(0) == doctest::Approx(4.0));
  CHECK(eig2.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("gram_eig eigenvalues are squared singular values") {
  Matrix X = random_matrix(3, 5, 11);
  auto eig = gram_eig(X.transpose() * X);

  Eigen::BDCSVD<Matrix> svd(X);
  Vector s = svd.singularValues();
  // X is 3x5: two eigenvalues of X^T X are zero
  for (int i = 0; i < 3; ++i)
    CHECK(eig.eigenvalues(i) == doctest::Approx(s(i) * s(i)).epsilon(1e-9));
  CHECK(eig.eigenvalues(3) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(eig.eigenvalues(4) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("gram_eig reconstructs the input") {
  for (std::uint64_t seed = 500; seed < 505; ++seed) {
    Matrix X = random_matrix(4, 6, seed);
    Matrix G = X.transpose() * X;
    auto eig = gram_eig(G);
    Matrix rebuilt =
        eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
    CHECK((rebuilt - G).norm() / G.norm() <= 1e-8);
    CHECK(eig.eigenvalues.minCoeff() >= 0.0);
    // descending order
    for (Eigen::Index i = 1; i < eig.eigenvalues.size(); ++i)
      CHECK(eig.eigenvalues(i) <= eig.eigenvalues(i - 1));
  }
}

TEST_CASE("gram_eig rejects asymmetric input") {
  Matrix G(2, 2);
  G << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(gram_eig(G), InvalidInputError);
}
