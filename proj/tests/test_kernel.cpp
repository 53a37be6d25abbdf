#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>

#include <cmath>

#include "mrdkit/kernel.hpp"
#include "mrdkit/linalg.hpp"
#include "mrdkit/rng.hpp"

using namespace mrdkit;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = rng.next_normal();
  return M;
}

// Explicit degree-2 polynomial feature map for m = 2, coef0 = 1:
// (x.y + 1)^2 = <phi(x), phi(y)> with
// phi(x) = (x1^2, x2^2, sqrt2 x1 x2, sqrt2 x1, sqrt2 x2, 1).
Matrix poly2_features(const SampleMatrix& X) {
  const double s2 = std::sqrt(2.0);
  Matrix F(6, X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double a = X(0, j), b = X(1, j);
    F.col(j) << a * a, b * b, s2 * a * b, s2 * a, s2 * b, 1.0;
  }
  return F;
}

}  // namespace

TEST_CASE("gram fixtures") {
  SampleMatrix x(2, 1), y(2, 1);
  x << 0.0, 0.0;
  y << 0.0, 0.0;
  Matrix K = gram(KernelSpec::gaussian(1.0), x, y);
  CHECK(K(0, 0) == doctest::Approx(1.0));

  y << 1.0, 0.0;
  K = gram(KernelSpec::gaussian(1.0), x, y);
  CHECK(K(0, 0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

  Matrix X = random_matrix(3, 4, 1);
  Matrix Y = random_matrix(3, 5, 2);
  Matrix lin = gram(KernelSpec::linear(), X, Y);
  CHECK((lin - X.transpose() * Y).norm() == doctest::Approx(0.0));
}

TEST_CASE("gram validates input") {
  Matrix X = random_matrix(3, 4, 1);
  Matrix Y = random_matrix(2, 4, 2);
  CHECK_THROWS_AS(gram(KernelSpec::gaussian(1.0), X, Y), InvalidInputError);
  CHECK_THROWS_AS(gram(KernelSpec::gaussian(-1.0), X, X), InvalidInputError);
  CHECK_THROWS_AS(gram(KernelSpec::polynomial(0), X, X), InvalidInputError);
}

TEST_CASE("gaussian gram entries in (0,1], unit diagonal, PSD") {
  Matrix X = random_matrix(3, 10, 17);
  Matrix K = gram(KernelSpec::gaussian(0.7), X, X);
  CHECK(K.minCoeff() > 0.0);
  CHECK(K.maxCoeff() <= 1.0 + 1e-15);
  for (int i = 0; i < 10; ++i) CHECK(K(i, i) == doctest::Approx(1.0));

  auto eig = linalg::gram_eig(0.5 * (K + K.transpose()));
  CHECK(eig.eigenvalues.minCoeff() >= -1e-9);
}

TEST_CASE("adaptive_bandwidth fixtures") {
  SampleMatrix z(2, 1);
  z << 0.0, 0.0;
  bool fallback = false;
  CHECK(adaptive_bandwidth(z, z, &fallback) == doctest::Approx(1.0));
  CHECK(fallback);

  SampleMatrix y(2, 1);
  y << 3.0, 4.0;
  CHECK(adaptive_bandwidth(z, y, &fallback) == doctest::Approx(5.0));
  CHECK_FALSE(fallback);

  SampleMatrix two(2, 2);
  two << 0.0, 1.0, 0.0, 0.0;
  CHECK(adaptive_bandwidth(two, z) == doctest::Approx(0.5));
}

TEST_CASE("kmrd_simplified identity cases") {
  SampleMatrix x(2, 1);
  x << 0.3, -0.4;
  auto single = kmrd_simplified(x, x, KernelSpec::gaussian(1.0), 0.0, 0.0);
  CHECK(single.distance == doctest::Approx(0.0).epsilon(1e-8));

  Matrix X = random_matrix(2, 3, 5);
  auto same = kmrd_simplified(X, X, KernelSpec::gaussian(1.0), 0.0, 0.0);
  CHECK(same.distance <= 1e-6);
}

TEST_CASE("kmrd_simplified matches a hand-assembled scalar oracle") {
  // m = 1, X1 = {0, 1}, X2 = {0, 2}, Gaussian r = 1, lambda = 0.1.
  SampleMatrix X1(1, 2), X2(1, 2);
  X1 << 0.0, 1.0;
  X2 << 0.0, 2.0;
  const double r = 1.0, lambda = 0.1;
  auto k = [&](double a, double b) { return std::exp(-(a - b) * (a - b) / (2.0 * r * r)); };

  Eigen::Matrix2d K11, K12, K22;
  K11 << k(0, 0), k(0, 1), k(1, 0), k(1, 1);
  K22 << k(0, 0), k(0, 2), k(2, 0), k(2, 2);
  K12 << k(0, 0), k(0, 2), k(1, 0), k(1, 2);

  Eigen::Matrix2d S12 = (K22 + lambda * Eigen::Matrix2d::Identity()).inverse() * K12.transpose();
  Eigen::Matrix2d S21 = (K11 + lambda * Eigen::Matrix2d::Identity()).inverse() * K12;
  const double res12 =
      K11.trace() - 2.0 * (K12 * S12).trace() + (S12.transpose() * K22 * S12).trace();
  const double res21 = K22.trace() - 2.0 * (K12.transpose() * S21).trace() +
                       (S21.transpose() * K11 * S21).trace();
  const double expected = std::sqrt(0.5 * res12 + 0.5 * res21);

  auto got = kmrd_simplified(X1, X2, KernelSpec::gaussian(1.0), lambda, lambda);
  CHECK(got.distance == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("kmrd_heuristic identity and single-point closed form") {
  Matrix X = random_matrix(2, 4, 9);
  CHECK(kmrd_heuristic(X, X, KernelSpec::gaussian(1.0)).distance <= 1e-8);

  SampleMatrix x1(2, 1), x2(2, 1);
  x1 << 0.0, 0.0;
  x2 << 1.2, -0.3;
  const double kv = std::exp(-(x1 - x2).squaredNorm() / 2.0);
  auto res = kmrd_heuristic(x1, x2, KernelSpec::gaussian(1.0));
  CHECK(res.lambda12 == 0.0);
  CHECK(res.lambda21 == 0.0);
  CHECK(res.distance == doctest::Approx(std::sqrt(1.0 - kv * kv)).epsilon(1e-10));
}

TEST_CASE("kmrd_heuristic tracks the feature-space oracle") {
  // Points spread out relative to the bandwidth keep the Gram blocks well
  // conditioned, the regime where the heuristic's 0.5% accuracy holds.
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const int n = 6 + 3 * static_cast<int>(seed);
    SplitMix64 rng(seed + 100);
    SampleMatrix X1(2, n), X2(2, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < 2; ++i) {
        X1(i, j) = 10.0 * rng.next_uniform();
        X2(i, j) = 4.0 + 10.0 * rng.next_uniform();
      }
    KernelSpec kernel = KernelSpec::gaussian(1.5);
    const double heuristic = kmrd_heuristic(X1, X2, kernel).distance;

    // Factor the joint Gram and run the linear spectral-ball oracle on it.
    auto [F1, F2] = detail::feature_factors(gram_blocks(kernel, X1, X2));
    OracleOptions oracle_opts;
    oracle_opts.tol = 1e-6;
    const double oracle = mrd_oracle(F1, F2, 0.5, 0.5, oracle_opts);
    CHECK(std::abs(heuristic - oracle) / oracle < 0.005);
  }
}

TEST_CASE("kmrd_tightened fixtures") {
  SampleMatrix x(2, 1);
  x << 0.5, 0.5;
  auto single = kmrd_tightened(x, x, KernelSpec::gaussian(1.0));
  CHECK(single.distance <= 1e-8);
  CHECK(single.s12_norm2 == doctest::Approx(1.0).epsilon(1e-8));

  Matrix X = random_matrix(2, 4, 33);
  auto res = kmrd_tightened(X, X, KernelSpec::gaussian(1.0));
  CHECK(res.distance > 0.0);

  auto [F1, F2] = detail::feature_factors(gram_blocks(KernelSpec::gaussian(1.0), X, X));
  OracleOptions opts;
  opts.tol = 1e-9;
  opts.ball = BallKind::Frobenius;
  const double oracle = mrd_oracle(F1, F2, 0.5, 0.5, opts);
  CHECK(res.distance == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("kmrd_tightened matches a test-local constrained scalar ridge") {
  SampleMatrix X1(1, 2), X2(1, 2);
  X1 << 0.0, 1.0;
  X2 << 0.0, 2.0;
  KernelSpec kernel = KernelSpec::gaussian(1.0);
  GramBlock blocks = gram_blocks(kernel, X1, X2);

  // Independent bisection using dense inverses, one direction at a time.
  auto direction = [](const Matrix& G, const Matrix& C, const Matrix& K_target) {
    auto S_at = [&](double lambda) -> Matrix {
      return (G + lambda * Matrix::Identity(G.rows(), G.cols())).inverse() * C;
    };
    double lambda = 0.0;
    Matrix S = G.fullPivLu().solve(C);
    if (S.norm() > 1.0) {
      double lo = 0.0, hi = 1e6;
      for (int i = 0; i < 400; ++i) {
        lambda = 0.5 * (lo + hi);
        S = S_at(lambda);
        (S.norm() > 1.0 ? lo : hi) = lambda;
      }
    }
    return K_target.trace() - 2.0 * (C.transpose() * S).trace() +
           (S.transpose() * G * S).trace();
  };
  const double res12 = direction(blocks.K22, blocks.K12.transpose(), blocks.K11);
  const double res21 = direction(blocks.K11, blocks.K12, blocks.K22);
  const double expected = std::sqrt(0.5 * res12 + 0.5 * res21);

  CHECK(kmrd_tightened(X1, X2, kernel).distance == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("linear kernel reproduces the linear simplified MRD") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 4);
    const int n1 = 3 + static_cast<int>(rng.next_u64() % 6);
    const int n2 = 3 + static_cast<int>(rng.next_u64() % 6);
    Matrix X1 = random_matrix(m, n1, 1000 + trial);
    Matrix X2 = random_matrix(m, n2, 2000 + trial);
    const double l12 = 0.05 + rng.next_uniform();
    const double l21 = 0.05 + rng.next_uniform();

    const double lin = mrd_simplified(X1, X2, l12, l21).distance;
    const double ker = kmrd_simplified(X1, X2, KernelSpec::linear(), l12, l21).distance;
    CHECK(std::abs(lin - ker) <= 1e-8 * (1.0 + lin));
  }
}

TEST_CASE("polynomial trace form equals the explicit feature form") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Matrix X1 = random_matrix(2, 4, 3000 + seed);
    Matrix X2 = random_matrix(2, 5, 4000 + seed);
    const double l12 = 0.3, l21 = 0.8;

    const double trace_form =
        kmrd_simplified(X1, X2, KernelSpec::polynomial(2, 1.0), l12, l21).distance;
    const double feature_form =
        mrd_simplified(poly2_features(X1), poly2_features(X2), l12, l21).distance;
    CHECK(std::abs(trace_form - feature_form) <= 1e-8 * (1.0 + trace_form));
  }
}

TEST_CASE("kernel symmetry and KMRD(X,X) = 0") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Matrix X1 = random_matrix(3, 6, 5000 + seed);
    Matrix X2 = random_matrix(3, 7, 6000 + seed);
    KernelSpec kernel = KernelSpec::gaussian(1.5);
    const double a = kmrd_heuristic(X1, X2, kernel).distance;
    const double b = kmrd_heuristic(X2, X1, kernel).distance;
    CHECK(std::abs(a - b) <= 1e-9 * (1.0 + a));
  }
}

TEST_CASE("adaptive KMRD is parameter free and symmetric") {
  Matrix X1 = random_matrix(2, 5, 71);
  Matrix X2 = random_matrix(2, 6, 72);
  auto spec = KernelSpec::gaussian_adaptive();
  GramBlock blocks = gram_blocks(spec, X1, X2);
  CHECK(blocks.bandwidth == doctest::Approx(adaptive_bandwidth(X1, X2)));

  const double a = kmrd_heuristic(X1, X2, spec).distance;
  const double b = kmrd_heuristic(X2, X1, spec).distance;
  CHECK(std::abs(a - b) <= 1e-9 * (1.0 + a));
}
