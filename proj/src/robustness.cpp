#include "mrdkit/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrdkit/data_io.hpp"
#include "mrdkit/rng.hpp"

namespace mrdkit {

double xi(int m, int n1, int n2, double t) {
  if (m < 1 || n1 < 1 || n2 < 1) throw InvalidInputError("xi: dimensions must be >= 1");
  if (t < 0.0) throw InvalidInputError("xi: t must be >= 0");
  const double mn = static_cast<double>(m) * std::max(n1, n2);
  return std::sqrt(mn + 2.0 * std::sqrt(mn * t) + 2.0 * t);
}

double epsilon_kernel(double sigma, double d_inf, double r, int m, double t) {
  if (r <= 0.0) throw InvalidInputError("epsilon_kernel: bandwidth must be > 0");
  if (sigma < 0.0 || d_inf < 0.0 || t < 0.0 || m < 1)
    throw InvalidInputError("epsilon_kernel: invalid arguments");
  const double xi_m = std::sqrt(m + 2.0 * std::sqrt(m * t) + 2.0 * t);
  const double shifted = sigma * xi_m + d_inf / std::numbers::sqrt2;
  return (shifted * shifted - 0.5 * d_inf * d_inf) / (r * r);
}

double psi(int n1, int n2, double w1, double w2, double eps) {
  if (eps < 0.0) throw InvalidInputError("psi: eps must be >= 0");
  if (n1 < 1 || n2 < 1) throw InvalidInputError("psi: set sizes must be >= 1");
  return 2.0 * std::sqrt((w1 + w2) * eps * n1 * n2);
}

namespace {

double max_pairwise_distance(const SampleMatrix& X, const SampleMatrix& Y) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < X.cols(); ++i)
    for (Eigen::Index j = 0; j < Y.cols(); ++j)
      best = std::max(best, (X.col(i) - Y.col(j)).norm());
  return best;
}

}  // namespace

RobustnessReport check_linear_bound(const SampleMatrix& X1, const SampleMatrix& X2, double sigma,
                                    double t, int trials, std::uint64_t seed,
                                    const MrdConfig& cfg) {
  check_sample_matrix(X1, "check_linear_bound X1");
  check_sample_matrix(X2, "check_linear_bound X2");
  check_same_dimension(X1, X2);
  if (trials < 1) throw InvalidInputError("check_linear_bound: trials must be >= 1");
  if (sigma < 0.0 || t < 0.0)
    throw InvalidInputError("check_linear_bound: sigma and t must be >= 0");
  cfg.validate();

  const int m = static_cast<int>(X1.rows());
  RobustnessReport report;
  report.kind = "linear";
  report.trials = trials;
  report.sigma = sigma;
  report.t = t;
  report.bound = 2.0 * sigma * xi(m, static_cast<int>(X1.cols()), static_cast<int>(X2.cols()), t) *
                 std::sqrt(cfg.w1 + cfg.w2);
  report.allowed_rate = std::clamp(std::exp(-t), 0.0, 1.0);

  const double clean = mrd_heuristic(X1, X2, cfg).distance;
  report.clean_distance = clean;
  report.deltas.reserve(trials);
  for (int k = 0; k < trials; ++k) {
    const SampleMatrix P1 = perturb(X1, sigma, SplitMix64::derive(seed, 2 * k));
    const SampleMatrix P2 = perturb(X2, sigma, SplitMix64::derive(seed, 2 * k + 1));
    const double noisy = mrd_heuristic(P1, P2, cfg).distance;
    const double delta = std::abs(noisy - clean);
    report.deltas.push_back(delta);
    if (delta > report.bound + report.gap_allowance_rel * (clean + noisy)) ++report.violations;
  }
  report.violation_rate = static_cast<double>(report.violations) / trials;
  return report;
}

RobustnessReport check_kernel_bound(const SampleMatrix& X1, const SampleMatrix& X2,
                                    const KernelSpec& kernel, double sigma, double t, int trials,
                                    std::uint64_t seed) {
  check_sample_matrix(X1, "check_kernel_bound X1");
  check_sample_matrix(X2, "check_kernel_bound X2");
  check_same_dimension(X1, X2);
  if (trials < 1) throw InvalidInputError("check_kernel_bound: trials must be >= 1");
  if (sigma < 0.0 || t < 0.0)
    throw InvalidInputError("check_kernel_bound: sigma and t must be >= 0");
  if (kernel.family != KernelFamily::Gaussian || kernel.adaptive())
    throw InvalidInputError("check_kernel_bound: needs a Gaussian kernel with fixed bandwidth");

  const int m = static_cast<int>(X1.rows());
  const int n1 = static_cast<int>(X1.cols());
  const int n2 = static_cast<int>(X2.cols());
  const double r = *kernel.bandwidth;
  const MrdConfig cfg;

  RobustnessReport report;
  report.kind = "kernel";
  report.trials = trials;
  report.sigma = sigma;
  report.t = t;
  report.bandwidth = r;
  const double d12 = max_pairwise_distance(X1, X2);
  report.eps_blocks = {epsilon_kernel(sigma, max_pairwise_distance(X1, X1), r, m, t),
                       epsilon_kernel(sigma, d12, r, m, t),
                       epsilon_kernel(sigma, d12, r, m, t),
                       epsilon_kernel(sigma, max_pairwise_distance(X2, X2), r, m, t)};
  report.eps = *std::max_element(report.eps_blocks.begin(), report.eps_blocks.end());
  report.bound = psi(n1, n2, cfg.w1, cfg.w2, report.eps);
  report.allowed_rate =
      std::clamp(static_cast<double>(n1 + n2) * (n1 + n2) * std::exp(-t), 0.0, 1.0);

  const double clean = kmrd_heuristic(X1, X2, kernel, cfg).distance;
  report.clean_distance = clean;
  report.deltas.reserve(trials);
  for (int k = 0; k < trials; ++k) {
    const SampleMatrix P1 = perturb(X1, sigma, SplitMix64::derive(seed, 2 * k));
    const SampleMatrix P2 = perturb(X2, sigma, SplitMix64::derive(seed, 2 * k + 1));
    const double noisy = kmrd_heuristic(P1, P2, kernel, cfg).distance;
    const double delta = std::abs(noisy - clean);
    report.deltas.push_back(delta);
    if (delta > report.bound + report.gap_allowance_rel * (clean + noisy)) ++report.violations;
  }
  report.violation_rate = static_cast<double>(report.violations) / trials;
  return report;
}

}  // namespace mrdkit
