#pragma once

#include <optional>

#include "mrdkit/mrd.hpp"
#include "mrdkit/types.hpp"

namespace mrdkit {

enum class KernelFamily { Gaussian, Polynomial, Linear };

struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  std::optional<double> bandwidth;  // Gaussian; empty means adaptive
  int degree = 2;                   // Polynomial
  double coef0 = 1.0;               // Polynomial

  bool adaptive() const { return family == KernelFamily::Gaussian && !bandwidth; }
  void validate() const;

  static KernelSpec gaussian(double r) { return {KernelFamily::Gaussian, r, 0, 0.0}; }
  static KernelSpec gaussian_adaptive() { return {KernelFamily::Gaussian, std::nullopt, 0, 0.0}; }
  static KernelSpec polynomial(int degree, double coef0 = 1.0) {
    return {KernelFamily::Polynomial, std::nullopt, degree, coef0};
  }
  static KernelSpec linear() { return {KernelFamily::Linear, std::nullopt, 0, 0.0}; }
};

/// Mean pairwise Euclidean distance between columns of X and columns of Y.
/// Falls back to 1.0 (flag set) when every pair coincides.
double adaptive_bandwidth(const SampleMatrix& X, const SampleMatrix& Y,
                          bool* fallback = nullptr);

/// nX x nY kernel matrix. Gaussian entries are exp(-||x - y||^2 / (2 r^2)).
Matrix gram(const KernelSpec& kernel, const SampleMatrix& X, const SampleMatrix& Y);

/// The three Gram blocks of a pair; K21 is always K12^T. For an adaptive
/// Gaussian kernel one bandwidth is estimated from the cross-distance matrix
/// of the pair and shared by all blocks.
struct GramBlock {
  Matrix K11, K12, K22;
  double bandwidth = 0.0;        // Gaussian only; 0 otherwise
  bool bandwidth_fallback = false;
};

GramBlock gram_blocks(const KernelSpec& kernel, const SampleMatrix& X1, const SampleMatrix& X2);

/// Kernelized MRD family, evaluated entirely from Gram blocks through the
/// trace expansion of the feature-space objective.
MrdResult kmrd_heuristic(const SampleMatrix& X1, const SampleMatrix& X2,
                         const KernelSpec& kernel, const MrdConfig& cfg = {});
MrdResult kmrd_tightened(const SampleMatrix& X1, const SampleMatrix& X2,
                         const KernelSpec& kernel, const MrdConfig& cfg = {});
MrdResult kmrd_simplified(const SampleMatrix& X1, const SampleMatrix& X2,
                          const KernelSpec& kernel, double lambda12, double lambda21,
                          double w1 = 0.5, double w2 = 0.5);

namespace detail {

/// Feature-space factor pair (F1, F2) with F1^T F1 = K11, F1^T F2 = K12,
/// F2^T F2 = K22, built from the joint Gram matrix. Lets the linear solvers
/// (including mrd_oracle) run on kernelized data.
std::pair<Matrix, Matrix> feature_factors(const GramBlock& blocks);

}  // namespace detail

}  // namespace mrdkit
