#pragma once

#include <optional>

#include "mrdkit/linalg.hpp"
#include "mrdkit/types.hpp"

namespace mrdkit {

enum class MrdVariant { HeuristicExact, Tightened, Simplified };

struct MrdConfig {
  MrdVariant variant = MrdVariant::HeuristicExact;
  double w1 = 0.5;
  double w2 = 0.5;
  std::optional<double> lambda12;  // Simplified only
  std::optional<double> lambda21;  // Simplified only
  double tol = 1e-6;
  int max_bisection_iters = 200;

  void validate() const;
};

struct MrdResult {
  double distance = 0.0;
  double s12_norm2 = 0.0;   // spectral norms of the returned coefficients
  double s21_norm2 = 0.0;
  double lambda12 = 0.0;
  double lambda21 = 0.0;
  double residual12 = 0.0;  // squared Frobenius residuals
  double residual21 = 0.0;
};

/// sqrt(w1 ||X1 - X2 S12||_F^2 + w2 ||X2 - X1 S21||_F^2)
double mrd_objective(const SampleMatrix& X1, const SampleMatrix& X2, const Matrix& S12,
                     const Matrix& S21, double w1, double w2);

struct LambdaSearchResult {
  double lambda = 0.0;
  Matrix coefficients;  // S12(lambda)
  double norm = 0.0;    // the constrained norm at lambda
};

/// Bisection for the ridge parameter that puts ||S12(lambda)||_2 at 1, where
/// S12(lambda) = (X2^T X2 + lambda I)^{-1} X2^T X1. Returns lambda = 0 when
/// the unconstrained solution is already feasible. The eigendecomposition of
/// X2^T X2 is computed once and reused across bisection steps.
LambdaSearchResult lambda_search(const SampleMatrix& X1, const SampleMatrix& X2, double tol,
                                 int max_iters = 200);

/// Same search against the Frobenius norm (tightened constraint set).
LambdaSearchResult lambda_search_frobenius(const SampleMatrix& X1, const SampleMatrix& X2,
                                           double tol, int max_iters = 200);

/// MRD under unit spectral-norm constraints, via the lambda search in both
/// regression directions.
MrdResult mrd_heuristic(const SampleMatrix& X1, const SampleMatrix& X2,
                        const MrdConfig& cfg = {});

/// MRD under unit Frobenius-norm constraints.
MrdResult mrd_tightened(const SampleMatrix& X1, const SampleMatrix& X2,
                        const MrdConfig& cfg = {});

/// Unconstrained ridge form with fixed regularizer in each direction.
MrdResult mrd_simplified(const SampleMatrix& X1, const SampleMatrix& X2, double lambda12,
                         double lambda21, double w1 = 0.5, double w2 = 0.5);

enum class BallKind { Spectral, Frobenius };

struct OracleOptions {
  double tol = 1e-6;
  long max_iters = 200000;
  BallKind ball = BallKind::Spectral;
};

/// Projected-gradient solver for the constrained mutual regression problem,
/// used as a validation oracle for the heuristic. Projection clips singular
/// values at 1 (spectral ball) or rescales (Frobenius ball); steps use
/// backtracking line search halving from 1.0. Stops once the duality gap
/// certifies the objective to tol (relative) or the gradient mapping drops
/// below tol. Intended for small instances.
double mrd_oracle(const SampleMatrix& X1, const SampleMatrix& X2, double w1, double w2,
                  const OracleOptions& opts);

inline double mrd_oracle(const SampleMatrix& X1, const SampleMatrix& X2, double w1, double w2,
                         double tol) {
  OracleOptions opts;
  opts.tol = tol;
  return mrd_oracle(X1, X2, w1, w2, opts);
}

namespace detail {

/// Shared bisection core over an explicit Gram matrix G and right-hand side C,
/// searching ||(G + lambda I)^{-1} C|| = 1. Also used by the kernel variants
/// with (K22, K21) in place of (X2^T X2, X2^T X1).
LambdaSearchResult ridge_constraint_search(const Matrix& G, const Matrix& C, bool frobenius,
                                           double tol, int max_iters);

}  // namespace detail

}  // namespace mrdkit
