#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrdkit/kernel.hpp"
#include "mrdkit/mrd.hpp"
#include "mrdkit/types.hpp"

namespace mrdkit {

/// Tail factor of the linear perturbation bound:
/// sqrt(m max{n1,n2} + 2 sqrt(m max{n1,n2} t) + 2t).
double xi(int m, int n1, int n2, double t);

/// Element-wise Gaussian-kernel perturbation bound
/// (1/r^2) [(sigma xi_m + D_inf/sqrt(2))^2 - D_inf^2/2] with
/// xi_m = sqrt(m + 2 sqrt(m t) + 2t).
double epsilon_kernel(double sigma, double d_inf, double r, int m, double t);

/// Kernel-distance perturbation bound 2 sqrt((w1 + w2) eps n1 n2).
double psi(int n1, int n2, double w1, double w2, double eps);

struct RobustnessReport {
  std::string kind;            // "linear" or "kernel"
  int trials = 0;
  double sigma = 0.0;
  double t = 0.0;
  double bound = 0.0;          // theoretical bound on |perturbed - clean|
  double allowed_rate = 0.0;   // probability budget, clamped to [0, 1]
  std::vector<double> deltas;  // per-trial |perturbed - clean|
  int violations = 0;
  double violation_rate = 0.0;
  double clean_distance = 0.0;
  // Heuristic-gap slack added per trial: 0.005 * (clean + perturbed), since
  // both distances come from the heuristic rather than the exact optimum.
  double gap_allowance_rel = 0.005;
  // kernel check only
  double eps = 0.0;
  double bandwidth = 0.0;
  std::vector<double> eps_blocks;  // eps_11, eps_12, eps_21, eps_22
};

/// Monte-Carlo check of the linear perturbation bound: perturb both inputs
/// with N(0, sigma^2) noise and compare |MRD(perturbed) - MRD(clean)| against
/// 2 sigma xi sqrt(w1 + w2). The allowed violation rate is e^{-t}.
RobustnessReport check_linear_bound(const SampleMatrix& X1, const SampleMatrix& X2, double sigma,
                                    double t, int trials, std::uint64_t seed,
                                    const MrdConfig& cfg = {});

/// Same for the kernel bound psi_eps with eps = max of the four block bounds
/// computed from the clean data's pairwise distance maxima. Requires a fixed
/// (non-adaptive) Gaussian bandwidth; allowed rate is (n1+n2)^2 e^{-t},
/// clamped at 1.
RobustnessReport check_kernel_bound(const SampleMatrix& X1, const SampleMatrix& X2,
                                    const KernelSpec& kernel, double sigma, double t, int trials,
                                    std::uint64_t seed);

}  // namespace mrdkit
