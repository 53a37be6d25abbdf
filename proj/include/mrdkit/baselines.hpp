#pragma once

#include "mrdkit/kernel.hpp"
#include "mrdkit/types.hpp"

namespace mrdkit {

enum class MmdEstimator { Biased, Unbiased };

/// Squared maximum mean discrepancy from Gram-block means. Biased is the
/// plug-in estimator over all pairs (>= 0); Unbiased drops within-block
/// diagonals and may be slightly negative, returned as-is.
double mmd2(const SampleMatrix& X, const SampleMatrix& Y, const KernelSpec& kernel,
            MmdEstimator estimator);

enum class SinkhornCost { SquaredEuclidean, Euclidean };
enum class SinkhornLogMode { Auto, Always, Never };

struct SinkhornConfig {
  double epsilon = 0.1;
  double marginal_tol = 1e-9;
  int max_iters = 10000;
  SinkhornCost cost = SinkhornCost::SquaredEuclidean;
  SinkhornLogMode log_mode = SinkhornLogMode::Auto;

  void validate() const;
};

struct SinkhornResult {
  double value = 0.0;          // <P, M> at the converged plan
  int iterations = 0;
  double marginal_error = 0.0; // L1 deviation of the plan marginals from uniform
  bool log_domain = false;
};

/// Entropic-regularized optimal transport between uniform empirical measures,
/// by alternating marginal scaling. Runs in the log domain (log-sum-exp) when
/// epsilon is small relative to the mean cost.
SinkhornResult sinkhorn(const SampleMatrix& X, const SampleMatrix& Y, const SinkhornConfig& cfg);

}  // namespace mrdkit
