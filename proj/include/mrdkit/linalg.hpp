#pragma once

#include "mrdkit/types.hpp"

namespace mrdkit::linalg {

/// Largest singular value. Full SVD when min(rows, cols) <= 64, power
/// iteration on the normal operator above that.
double spectral_norm(const Matrix& M);

/// Solves (A^T A + lambda I) S = A^T B for A (m x n), B (m x p).
/// lambda = 0 on a rank-deficient A returns the minimum-norm least-squares
/// solution, or throws SingularSystemError when allow_pinv is false.
Matrix ridge_solve(const Matrix& A, const Matrix& B, double lambda, bool allow_pinv = true);

/// Symmetric eigendecomposition of a PSD Gram matrix, eigenvalues descending
/// and clamped at zero.
struct GramEig {
  Matrix eigenvectors;  // n x n orthogonal
  Vector eigenvalues;   // length n, descending, >= 0
};

GramEig gram_eig(const Matrix& G);

/// (G + lambda I)^{-1} C through a precomputed decomposition of G.
/// At lambda = 0 near-zero eigenvalues are truncated (pseudoinverse).
Matrix psd_ridge_apply(const GramEig& eig, const Matrix& C, double lambda);

/// Ridge shrinkage factors 1/(sigma_i + lambda) with the same pseudoinverse
/// truncation rule as psd_ridge_apply.
Vector psd_ridge_factors(const GramEig& eig, double lambda);

}  // namespace mrdkit::linalg
