#include "mrdkit/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrdkit/log.hpp"

namespace mrdkit {

void KernelSpec::validate() const {
  switch (family) {
    case KernelFamily::Gaussian:
      if (bandwidth && *bandwidth <= 0.0)
        throw InvalidInputError("KernelSpec: Gaussian bandwidth must be > 0");
      break;
    case KernelFamily::Polynomial:
      if (degree < 1) throw InvalidInputError("KernelSpec: polynomial degree must be >= 1");
      break;
    case KernelFamily::Linear:
      break;
  }
}

double adaptive_bandwidth(const SampleMatrix& X, const SampleMatrix& Y, bool* fallback) {
  check_sample_matrix(X, "adaptive_bandwidth X");
  check_sample_matrix(Y, "adaptive_bandwidth Y");
  check_same_dimension(X, Y);
  if (fallback) *fallback = false;

  double sum = 0.0;
  for (Eigen::Index i = 0; i < X.cols(); ++i)
    for (Eigen::Index j = 0; j < Y.cols(); ++j) sum += (X.col(i) - Y.col(j)).norm();
  const double mean = sum / static_cast<double>(X.cols() * Y.cols());
  if (mean > 0.0) return mean;

  log::warn("adaptive_bandwidth: all pairwise distances are zero, falling back to 1.0");
  if (fallback) *fallback = true;
  return 1.0;
}

namespace {

Matrix gram_with_bandwidth(const KernelSpec& kernel, const SampleMatrix& X,
                           const SampleMatrix& Y, double r) {
  const Eigen::Index nx = X.cols(), ny = Y.cols();
  Matrix K(nx, ny);
  switch (kernel.family) {
    case KernelFamily::Linear:
      K = X.transpose() * Y;
      break;
    case KernelFamily::Polynomial: {
      K = (X.transpose() * Y).array() + kernel.coef0;
      K = K.array().pow(kernel.degree);
      break;
    }
    case KernelFamily::Gaussian: {
      const double inv = 1.0 / (2.0 * r * r);
      for (Eigen::Index i = 0; i < nx; ++i)
        for (Eigen::Index j = 0; j < ny; ++j)
          K(i, j) = std::exp(-(X.col(i) - Y.col(j)).squaredNorm() * inv);
      break;
    }
  }
  return K;
}

Matrix symmetrized_self_gram(const KernelSpec& kernel, const SampleMatrix& X, double r) {
  Matrix K = gram_with_bandwidth(kernel, X, X, r);
  return 0.5 * (K + K.transpose());
}

double resolve_bandwidth(const KernelSpec& kernel, const SampleMatrix& X, const SampleMatrix& Y,
                         bool* fallback) {
  if (kernel.family != KernelFamily::Gaussian) return 0.0;
  if (kernel.bandwidth) return *kernel.bandwidth;
  return adaptive_bandwidth(X, Y, fallback);
}

// Tr(K11) - 2 Tr(K12 S) + Tr(S^T K22 S), clamped at zero when round-off
// pushes the squared feature-space norm slightly negative.
double trace_residual(const Matrix& K11, const Matrix& K12, const Matrix& K22, const Matrix& S) {
  const double value =
      K11.trace() - 2.0 * (K12 * S).trace() + (S.transpose() * K22 * S).trace();
  const double floor = -1e-9 * std::max(1.0, std::abs(K11.trace()));
  if (value < floor)
    throw InvalidInputError("kernel residual " + std::to_string(value) +
                            " is negative beyond round-off");
  return std::max(0.0, value);
}

MrdResult assemble_kernel_result(const GramBlock& blocks, const LambdaSearchResult& s12,
                                 const LambdaSearchResult& s21, double w1, double w2) {
  MrdResult out;
  out.lambda12 = s12.lambda;
  out.lambda21 = s21.lambda;
  out.s12_norm2 = linalg::spectral_norm(s12.coefficients);
  out.s21_norm2 = linalg::spectral_norm(s21.coefficients);
  out.residual12 = trace_residual(blocks.K11, blocks.K12, blocks.K22, s12.coefficients);
  out.residual21 =
      trace_residual(blocks.K22, blocks.K12.transpose(), blocks.K11, s21.coefficients);
  out.distance = std::sqrt(w1 * out.residual12 + w2 * out.residual21);
  return out;
}

MrdResult kmrd_searched(const SampleMatrix& X1, const SampleMatrix& X2, const KernelSpec& kernel,
                        const MrdConfig& cfg, bool frobenius) {
  cfg.validate();
  GramBlock blocks = gram_blocks(kernel, X1, X2);
  // S12 regresses phi(X1) on phi(X2): the Gram pair is (K22, K21).
  LambdaSearchResult s12 = detail::ridge_constraint_search(
      blocks.K22, blocks.K12.transpose(), frobenius, cfg.tol, cfg.max_bisection_iters);
  LambdaSearchResult s21 = detail::ridge_constraint_search(
      blocks.K11, blocks.K12, frobenius, cfg.tol, cfg.max_bisection_iters);
  return assemble_kernel_result(blocks, s12, s21, cfg.w1, cfg.w2);
}

}  // namespace

Matrix gram(const KernelSpec& kernel, const SampleMatrix& X, const SampleMatrix& Y) {
  kernel.validate();
  check_sample_matrix(X, "gram X");
  check_sample_matrix(Y, "gram Y");
  check_same_dimension(X, Y);
  const double r = resolve_bandwidth(kernel, X, Y, nullptr);
  return gram_with_bandwidth(kernel, X, Y, r);
}

GramBlock gram_blocks(const KernelSpec& kernel, const SampleMatrix& X1, const SampleMatrix& X2) {
  kernel.validate();
  check_sample_matrix(X1, "gram_blocks X1");
  check_sample_matrix(X2, "gram_blocks X2");
  check_same_dimension(X1, X2);

  GramBlock out;
  out.bandwidth = resolve_bandwidth(kernel, X1, X2, &out.bandwidth_fallback);
  out.K11 = symmetrized_self_gram(kernel, X1, out.bandwidth);
  out.K22 = symmetrized_self_gram(kernel, X2, out.bandwidth);
  out.K12 = gram_with_bandwidth(kernel, X1, X2, out.bandwidth);
  return out;
}

MrdResult kmrd_heuristic(const SampleMatrix& X1, const SampleMatrix& X2,
                         const KernelSpec& kernel, const MrdConfig& cfg) {
  return kmrd_searched(X1, X2, kernel, cfg, /*frobenius=*/false);
}

MrdResult kmrd_tightened(const SampleMatrix& X1, const SampleMatrix& X2,
                         const KernelSpec& kernel, const MrdConfig& cfg) {
  return kmrd_searched(X1, X2, kernel, cfg, /*frobenius=*/true);
}

MrdResult kmrd_simplified(const SampleMatrix& X1, const SampleMatrix& X2,
                          const KernelSpec& kernel, double lambda12, double lambda21, double w1,
                          double w2) {
  if (lambda12 < 0.0 || lambda21 < 0.0)
    throw InvalidInputError("kmrd_simplified: lambdas must be >= 0");
  GramBlock blocks = gram_blocks(kernel, X1, X2);

  linalg::GramEig eig22 = linalg::gram_eig(blocks.K22);
  linalg::GramEig eig11 = linalg::gram_eig(blocks.K11);
  LambdaSearchResult s12{lambda12,
                         linalg::psd_ridge_apply(eig22, blocks.K12.transpose(), lambda12), 0.0};
  LambdaSearchResult s21{lambda21, linalg::psd_ridge_apply(eig11, blocks.K12, lambda21), 0.0};
  return assemble_kernel_result(blocks, s12, s21, w1, w2);
}

namespace detail {

std::pair<Matrix, Matrix> feature_factors(const GramBlock& blocks) {
  const Eigen::Index n1 = blocks.K11.rows(), n2 = blocks.K22.rows();
  Matrix joint(n1 + n2, n1 + n2);
  joint.topLeftCorner(n1, n1) = blocks.K11;
  joint.topRightCorner(n1, n2) = blocks.K12;
  joint.bottomLeftCorner(n2, n1) = blocks.K12.transpose();
  joint.bottomRightCorner(n2, n2) = blocks.K22;

  linalg::GramEig eig = linalg::gram_eig(joint);
  Matrix F = eig.eigenvalues.array().sqrt().matrix().asDiagonal() * eig.eigenvectors.transpose();
  return {F.leftCols(n1), F.rightCols(n2)};
}

}  // namespace detail

}  // namespace mrdkit
