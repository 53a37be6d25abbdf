#include "mrdkit/mrd.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace mrdkit {

namespace {

// Round-off allowance when deciding that the unconstrained solution already
// sits inside the unit ball.
constexpr double kFeasEps = 1e-10;

void check_pair(const SampleMatrix& X1, const SampleMatrix& X2) {
  check_sample_matrix(X1, "X1");
  check_sample_matrix(X2, "X2");
  check_same_dimension(X1, X2);
}

double squared_residual(const SampleMatrix& target, const SampleMatrix& basis, const Matrix& S) {
  return (target - basis * S).squaredNorm();
}

MrdResult assemble_result(const SampleMatrix& X1, const SampleMatrix& X2,
                          const LambdaSearchResult& s12, const LambdaSearchResult& s21,
                          double w1, double w2) {
  MrdResult out;
  out.lambda12 = s12.lambda;
  out.lambda21 = s21.lambda;
  out.s12_norm2 = linalg::spectral_norm(s12.coefficients);
  out.s21_norm2 = linalg::spectral_norm(s21.coefficients);
  out.residual12 = squared_residual(X1, X2, s12.coefficients);
  out.residual21 = squared_residual(X2, X1, s21.coefficients);
  out.distance = std::sqrt(w1 * out.residual12 + w2 * out.residual21);
  return out;
}

}  // namespace

void MrdConfig::validate() const {
  if (w1 < 0.0 || w2 < 0.0 || std::abs(w1 + w2 - 1.0) > 1e-12)
    throw InvalidInputError("MrdConfig: weights must be nonnegative with w1 + w2 = 1");
  if (tol <= 0.0) throw InvalidInputError("MrdConfig: tol must be > 0");
  if (max_bisection_iters < 1) throw InvalidInputError("MrdConfig: max_bisection_iters must be >= 1");
  if ((lambda12 && *lambda12 < 0.0) || (lambda21 && *lambda21 < 0.0))
    throw InvalidInputError("MrdConfig: fixed lambdas must be >= 0");
}

double mrd_objective(const SampleMatrix& X1, const SampleMatrix& X2, const Matrix& S12,
                     const Matrix& S21, double w1, double w2) {
  check_pair(X1, X2);
  if (S12.rows() != X2.cols() || S12.cols() != X1.cols())
    throw InvalidInputError("mrd_objective: S12 must be n2 x n1");
  if (S21.rows() != X1.cols() || S21.cols() != X2.cols())
    throw InvalidInputError("mrd_objective: S21 must be n1 x n2");
  return std::sqrt(w1 * squared_residual(X1, X2, S12) + w2 * squared_residual(X2, X1, S21));
}

namespace detail {

LambdaSearchResult ridge_constraint_search(const Matrix& G, const Matrix& C, bool frobenius,
                                           double tol, int max_iters) {
  if (tol <= 0.0) throw InvalidInputError("ridge_constraint_search: tol must be > 0");

  linalg::GramEig eig = linalg::gram_eig(G);
  const Matrix W = eig.eigenvectors.transpose() * C;
  const Vector row_sq = W.rowwise().squaredNorm();
  const double sigma_min = eig.eigenvalues(eig.eigenvalues.size() - 1);

  auto norm_at = [&](double lambda) {
    Vector f = linalg::psd_ridge_factors(eig, lambda);
    if (frobenius) return std::sqrt((f.array().square() * row_sq.array()).sum());
    // ||V diag(f) W||_2 = ||diag(f) W||_2 since V is orthogonal.
    return linalg::spectral_norm(f.asDiagonal() * W);
  };
  auto coeff_at = [&](double lambda) -> Matrix {
    Vector f = linalg::psd_ridge_factors(eig, lambda);
    return eig.eigenvectors * (f.asDiagonal() * W);
  };

  const double norm0 = norm_at(0.0);
  if (norm0 <= 1.0 + kFeasEps) return {0.0, coeff_at(0.0), norm0};

  // Lemma-style bracket: the norm at r is <= 1, so bisection on [0, r] is
  // well posed. For the Frobenius target the same argument runs with ||C||_F.
  const double c_norm = frobenius ? C.norm() : linalg::spectral_norm(C);
  const double r_max = std::max(0.0, c_norm - sigma_min);
  if (r_max <= 0.0) return {0.0, coeff_at(0.0), norm0};

  double lo = 0.0, hi = r_max;
  double c = 0.5 * (lo + hi);
  double nrm = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    nrm = norm_at(c);
    if (std::abs(nrm - 1.0) < tol) return {c, coeff_at(c), nrm};
    if (nrm > 1.0)
      lo = c;
    else
      hi = c;
    c = 0.5 * (lo + hi);
  }
  throw ConvergenceError("lambda search did not converge in " + std::to_string(max_iters) +
                         " iterations: bracket [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "], last norm " + std::to_string(nrm));
}

}  // namespace detail

LambdaSearchResult lambda_search(const SampleMatrix& X1, const SampleMatrix& X2, double tol,
                                 int max_iters) {
  check_pair(X1, X2);
  return detail::ridge_constraint_search(X2.transpose() * X2, X2.transpose() * X1,
                                         /*frobenius=*/false, tol, max_iters);
}

LambdaSearchResult lambda_search_frobenius(const SampleMatrix& X1, const SampleMatrix& X2,
                                           double tol, int max_iters) {
  check_pair(X1, X2);
  return detail::ridge_constraint_search(X2.transpose() * X2, X2.transpose() * X1,
                                         /*frobenius=*/true, tol, max_iters);
}

MrdResult mrd_heuristic(const SampleMatrix& X1, const SampleMatrix& X2, const MrdConfig& cfg) {
  cfg.validate();
  check_pair(X1, X2);
  LambdaSearchResult s12 = lambda_search(X1, X2, cfg.tol, cfg.max_bisection_iters);
  LambdaSearchResult s21 = lambda_search(X2, X1, cfg.tol, cfg.max_bisection_iters);
  return assemble_result(X1, X2, s12, s21, cfg.w1, cfg.w2);
}

MrdResult mrd_tightened(const SampleMatrix& X1, const SampleMatrix& X2, const MrdConfig& cfg) {
  cfg.validate();
  check_pair(X1, X2);
  LambdaSearchResult s12 = lambda_search_frobenius(X1, X2, cfg.tol, cfg.max_bisection_iters);
  LambdaSearchResult s21 = lambda_search_frobenius(X2, X1, cfg.tol, cfg.max_bisection_iters);
  return assemble_result(X1, X2, s12, s21, cfg.w1, cfg.w2);
}

MrdResult mrd_simplified(const SampleMatrix& X1, const SampleMatrix& X2, double lambda12,
                         double lambda21, double w1, double w2) {
  check_pair(X1, X2);
  if (lambda12 < 0.0 || lambda21 < 0.0)
    throw InvalidInputError("mrd_simplified: lambdas must be >= 0");
  LambdaSearchResult s12{lambda12, linalg::ridge_solve(X2, X1, lambda12), 0.0};
  LambdaSearchResult s21{lambda21, linalg::ridge_solve(X1, X2, lambda21), 0.0};
  return assemble_result(X1, X2, s12, s21, w1, w2);
}

namespace {

Matrix project_spectral_ball(const Matrix& S) {
  Eigen::JacobiSVD<Matrix> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 1.0) return S;
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::min(s(i), 1.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

Matrix project_frobenius_ball(const Matrix& S) {
  const double n = S.norm();
  return n <= 1.0 ? S : Matrix(S / n);
}

// Support function of the unit ball at -grad: the Frank-Wolfe duality gap
// <grad, T> + sup_{||S|| <= 1} <-grad, S> upper-bounds f(T) - f*.
double duality_gap(const Matrix& grad, const Matrix& T, BallKind ball) {
  double support;
  if (ball == BallKind::Spectral) {
    Eigen::JacobiSVD<Matrix> svd(grad);
    support = svd.singularValues().sum();  // nuclear norm
  } else {
    support = grad.norm();
  }
  return grad.cwiseProduct(T).sum() + support;
}

// Minimizes ||B - A T||_F^2 over the unit ball via projected gradient with
// backtracking. Stops when the duality gap certifies the value to tol
// (relative) or the gradient-mapping norm falls below tol.
double projected_ls_min(const Matrix& A, const Matrix& B, BallKind ball, double tol,
                        long max_iters) {
  auto project = [&](const Matrix& S) {
    return ball == BallKind::Spectral ? project_spectral_ball(S) : project_frobenius_ball(S);
  };
  auto objective = [&](const Matrix& T) { return (B - A * T).squaredNorm(); };

  Matrix T = Matrix::Zero(A.cols(), B.cols());
  double f = objective(T);
  const double grad0 = (2.0 * A.transpose() * (A * T - B)).norm();
  const double stop = tol * std::max(1.0, grad0);

  double pg_norm = 0.0;
  for (long it = 0; it < max_iters; ++it) {
    Matrix grad = 2.0 * A.transpose() * (A * T - B);
    if (duality_gap(grad, T, ball) <= tol * std::max(1.0, f)) return f;

    double step = 1.0;
    Matrix T_next;
    double f_next = 0.0;
    while (true) {
      T_next = project(T - step * grad);
      f_next = objective(T_next);
      const Matrix diff = T_next - T;
      // Sufficient-decrease test of proximal-gradient backtracking.
      const double quad = f + grad.cwiseProduct(diff).sum() + diff.squaredNorm() / (2.0 * step);
      if (f_next <= quad + 1e-15 * std::max(1.0, std::abs(f))) break;
      step *= 0.5;
      if (step < 1e-18)
        throw ConvergenceError("mrd_oracle: line search collapsed (gradient norm " +
                               std::to_string(grad.norm()) + ")");
    }
    pg_norm = (T - T_next).norm() / step;
    T = T_next;
    f = f_next;
    if (pg_norm < stop) return f;
  }
  throw ConvergenceError("mrd_oracle: projected gradient hit the iteration cap with gradient "
                         "mapping norm " + std::to_string(pg_norm));
}

// The objective depends on S only through (basis x S), so the search space is
// reduced to the row space of the basis: with basis = U diag(s) V^T and
// T = V^T S, minimizing over ||T|| <= 1 gives the same optimal value.
double constrained_direction_min(const SampleMatrix& target, const SampleMatrix& basis,
                                 BallKind ball, double tol, long max_iters) {
  Eigen::BDCSVD<Matrix> svd(basis, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  const double cut = s.size() > 0 ? s(0) * 1e-14 : 0.0;
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  if (rank == 0) return target.squaredNorm();  // basis is numerically zero

  Matrix reduced = svd.matrixU().leftCols(rank) * s.head(rank).asDiagonal();
  return projected_ls_min(reduced, target, ball, tol, max_iters);
}

}  // namespace

double mrd_oracle(const SampleMatrix& X1, const SampleMatrix& X2, double w1, double w2,
                  const OracleOptions& opts) {
  check_pair(X1, X2);
  if (w1 < 0.0 || w2 < 0.0) throw InvalidInputError("mrd_oracle: weights must be >= 0");
  if (opts.tol <= 0.0) throw InvalidInputError("mrd_oracle: tol must be > 0");

  // The two regression directions are independent subproblems.
  const double r12 = constrained_direction_min(X1, X2, opts.ball, opts.tol, opts.max_iters);
  const double r21 = constrained_direction_min(X2, X1, opts.ball, opts.tol, opts.max_iters);
  return std::sqrt(w1 * r12 + w2 * r21);
}

}  // namespace mrdkit
