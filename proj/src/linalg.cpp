#include "mrdkit/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

#include "mrdkit/rng.hpp"

namespace mrdkit::linalg {

namespace {

// Relative rank cutoff for the lambda = 0 pseudoinverse paths. Eigenvalues of
// a Gram matrix below cut * largest are treated as zero.
constexpr double kRankCutoff = 1e-12;

double power_iteration_norm(const Matrix& M) {
  const Eigen::Index n = M.cols();
  SplitMix64 rng(0x5eedULL);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.next_normal();
  v.normalize();

  double sigma = 0.0;
  constexpr int kMaxIters = 10000;
  constexpr double kTol = 1e-10;
  for (int it = 0; it < kMaxIters; ++it) {
    Vector mv = M * v;
    double next = mv.norm();
    if (next == 0.0) return 0.0;
    v = M.transpose() * mv;
    v /= v.norm();
    if (std::abs(next - sigma) <= kTol * std::max(1.0, next)) return next;
    sigma = next;
  }
  throw ConvergenceError("spectral_norm: power iteration did not converge in 10000 iterations "
                         "(last estimate " + std::to_string(sigma) + ")");
}

}  // namespace

double spectral_norm(const Matrix& M) {
  check_sample_matrix(M, "spectral_norm input");
  if (std::min(M.rows(), M.cols()) <= 64) {
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
  }
  return power_iteration_norm(M);
}

Matrix ridge_solve(const Matrix& A, const Matrix& B, double lambda, bool allow_pinv) {
  check_sample_matrix(A, "ridge_solve A");
  check_sample_matrix(B, "ridge_solve B");
  if (A.rows() != B.rows())
    throw InvalidInputError("ridge_solve: A and B must have the same number of rows");
  if (lambda < 0.0) throw InvalidInputError("ridge_solve: lambda must be >= 0");

  // Thin SVD of A diagonalizes the normal equations: with A = U diag(s) V^T,
  // (A^T A + lambda I)^{-1} A^T B = V diag(s / (s^2 + lambda)) U^T B.
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double smax2 = s(0) * s(0);

  Vector f(s.size());
  if (lambda == 0.0) {
    const double cut2 = kRankCutoff * smax2;
    bool deficient = false;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double s2 = s(i) * s(i);
      if (s2 > cut2) {
        f(i) = 1.0 / s(i);
      } else {
        f(i) = 0.0;
        deficient = true;
      }
    }
    if (deficient && !allow_pinv)
      throw SingularSystemError("ridge_solve: A^T A is singular at lambda = 0");
  } else {
    for (Eigen::Index i = 0; i < s.size(); ++i) f(i) = s(i) / (s(i) * s(i) + lambda);
  }
  return svd.matrixV() * (f.asDiagonal() * (svd.matrixU().transpose() * B));
}

GramEig gram_eig(const Matrix& G) {
  check_sample_matrix(G, "gram_eig input");
  if (G.rows() != G.cols()) throw InvalidInputError("gram_eig: matrix must be square");

  const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
  const double asym = (G - G.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale)
    throw InvalidInputError("gram_eig: matrix asymmetry " + std::to_string(asym) +
                            " exceeds tolerance");

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (G + G.transpose()));
  if (es.info() != Eigen::Success) throw ConvergenceError("gram_eig: eigensolver failed");

  // Eigen returns ascending order; flip to descending and clamp round-off
  // negatives at zero (Gram matrices are PSD in exact arithmetic).
  const Eigen::Index n = G.rows();
  GramEig out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  const double lmax = std::max(0.0, out.eigenvalues(0));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.eigenvalues(i) < -1e-10 * std::max(1.0, lmax))
      throw InvalidInputError("gram_eig: matrix is not PSD up to round-off (eigenvalue " +
                              std::to_string(out.eigenvalues(i)) + ")");
    out.eigenvalues(i) = std::max(0.0, out.eigenvalues(i));
  }
  return out;
}

Vector psd_ridge_factors(const GramEig& eig, double lambda) {
  if (lambda < 0.0) throw InvalidInputError("psd_ridge_factors: lambda must be >= 0");
  const Vector& sigma = eig.eigenvalues;
  Vector f(sigma.size());
  if (lambda == 0.0) {
    const double cut = kRankCutoff * sigma(0);
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      f(i) = sigma(i) > cut ? 1.0 / sigma(i) : 0.0;
  } else {
    for (Eigen::Index i = 0; i < sigma.size(); ++i) f(i) = 1.0 / (sigma(i) + lambda);
  }
  return f;
}

Matrix psd_ridge_apply(const GramEig& eig, const Matrix& C, double lambda) {
  if (eig.eigenvectors.rows() != C.rows())
    throw InvalidInputError("psd_ridge_apply: dimension mismatch");
  Vector f = psd_ridge_factors(eig, lambda);
  return eig.eigenvectors * (f.asDiagonal() * (eig.eigenvectors.transpose() * C));
}

}  // namespace mrdkit::linalg
