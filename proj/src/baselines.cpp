#include "mrdkit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mrdkit {

double mmd2(const SampleMatrix& X, const SampleMatrix& Y, const KernelSpec& kernel,
            MmdEstimator estimator) {
  check_sample_matrix(X, "mmd2 X");
  check_sample_matrix(Y, "mmd2 Y");
  check_same_dimension(X, Y);
  const Eigen::Index nx = X.cols(), ny = Y.cols();
  if (estimator == MmdEstimator::Unbiased && (nx < 2 || ny < 2))
    throw InvalidInputError("mmd2: unbiased estimator needs at least 2 samples per set");

  GramBlock blocks = gram_blocks(kernel, X, Y);
  const double cross = 2.0 * blocks.K12.mean();

  if (estimator == MmdEstimator::Biased) {
    const double value = blocks.K11.mean() - cross + blocks.K22.mean();
    return std::max(0.0, value);  // squared RKHS norm; clear round-off negatives
  }
  const double xx =
      (blocks.K11.sum() - blocks.K11.trace()) / static_cast<double>(nx * (nx - 1));
  const double yy =
      (blocks.K22.sum() - blocks.K22.trace()) / static_cast<double>(ny * (ny - 1));
  return xx - cross + yy;
}

void SinkhornConfig::validate() const {
  if (epsilon <= 0.0) throw InvalidInputError("SinkhornConfig: epsilon must be > 0");
  if (marginal_tol <= 0.0) throw InvalidInputError("SinkhornConfig: marginal_tol must be > 0");
  if (max_iters < 1) throw InvalidInputError("SinkhornConfig: max_iters must be >= 1");
}

namespace {

Matrix cost_matrix(const SampleMatrix& X, const SampleMatrix& Y, SinkhornCost cost) {
  Matrix M(X.cols(), Y.cols());
  for (Eigen::Index i = 0; i < X.cols(); ++i)
    for (Eigen::Index j = 0; j < Y.cols(); ++j) {
      const double d2 = (X.col(i) - Y.col(j)).squaredNorm();
      M(i, j) = cost == SinkhornCost::SquaredEuclidean ? d2 : std::sqrt(d2);
    }
  return M;
}

double marginal_error(const Matrix& P, const Vector& r, const Vector& c) {
  return (P.rowwise().sum() - r).cwiseAbs().sum() + (P.colwise().sum().transpose() - c).cwiseAbs().sum();
}

SinkhornResult scaling_iterations(const Matrix& M, const Vector& r, const Vector& c,
                                  const SinkhornConfig& cfg) {
  const Matrix K = (-M / cfg.epsilon).array().exp();
  Vector u = Vector::Ones(r.size());
  Vector v = Vector::Ones(c.size());

  SinkhornResult out;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    u = r.cwiseQuotient(K * v);
    v = c.cwiseQuotient(K.transpose() * u);
    Matrix P = u.asDiagonal() * K * v.asDiagonal();
    out.marginal_error = marginal_error(P, r, c);
    out.iterations = it;
    if (out.marginal_error < cfg.marginal_tol) {
      out.value = P.cwiseProduct(M).sum();
      return out;
    }
  }
  throw ConvergenceError("sinkhorn: no convergence in " + std::to_string(cfg.max_iters) +
                         " iterations, marginal error " + std::to_string(out.marginal_error));
}

// Log-domain updates on the dual potentials, stable for small epsilon.
SinkhornResult log_domain_iterations(const Matrix& M, const Vector& r, const Vector& c,
                                     const SinkhornConfig& cfg) {
  const double eps = cfg.epsilon;
  const Vector log_r = r.array().log();
  const Vector log_c = c.array().log();
  Vector f = Vector::Zero(r.size());
  Vector g = Vector::Zero(c.size());

  auto lse_rows = [&](const Matrix& Z) {  // log sum exp over each row
    Vector m = Z.rowwise().maxCoeff();
    return Vector(m.array() + (Z.colwise() - m).array().exp().rowwise().sum().log());
  };

  SinkhornResult out;
  out.log_domain = true;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    Matrix Z = (g.transpose().replicate(M.rows(), 1) - M) / eps;
    f = eps * (log_r - lse_rows(Z));
    Matrix Zt = ((f.replicate(1, M.cols()) - M) / eps).transpose();
    g = eps * (log_c - lse_rows(Zt));

    Matrix logP = ((f.replicate(1, M.cols()) + g.transpose().replicate(M.rows(), 1)) - M) / eps;
    Matrix P = logP.array().exp();
    out.marginal_error = marginal_error(P, r, c);
    out.iterations = it;
    if (out.marginal_error < cfg.marginal_tol) {
      out.value = P.cwiseProduct(M).sum();
      return out;
    }
  }
  throw ConvergenceError("sinkhorn (log domain): no convergence in " +
                         std::to_string(cfg.max_iters) + " iterations, marginal error " +
                         std::to_string(out.marginal_error));
}

}  // namespace

SinkhornResult sinkhorn(const SampleMatrix& X, const SampleMatrix& Y, const SinkhornConfig& cfg) {
  cfg.validate();
  check_sample_matrix(X, "sinkhorn X");
  check_sample_matrix(Y, "sinkhorn Y");
  check_same_dimension(X, Y);

  const Matrix M = cost_matrix(X, Y, cfg.cost);
  const Vector r = Vector::Constant(X.cols(), 1.0 / static_cast<double>(X.cols()));
  const Vector c = Vector::Constant(Y.cols(), 1.0 / static_cast<double>(Y.cols()));

  bool use_log = cfg.log_mode == SinkhornLogMode::Always ||
                 (cfg.log_mode == SinkhornLogMode::Auto && cfg.epsilon < 0.05 * M.mean());
  return use_log ? log_domain_iterations(M, r, c, cfg) : scaling_iterations(M, r, c, cfg);
}

}  // namespace mrdkit
