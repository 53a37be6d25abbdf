#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mrdkit/types.hpp"

namespace mrdkit {

using MetricFn = std::function<double(const SampleMatrix&, const SampleMatrix&)>;

struct DistanceMatrix {
  Matrix values;           // N x N, symmetric, zero diagonal
  std::string metric_tag;  // which distance + config produced it
};

/// Pairwise distances over a collection: upper triangle computed, mirrored,
/// then symmetrized with D <- (D + D^T)/2 and the diagonal forced to zero.
/// jobs <= 1 runs serially, jobs = 0 uses the hardware thread count.
DistanceMatrix pairwise_distances(const std::vector<SampleMatrix>& collection,
                                  const MetricFn& metric, const std::string& metric_tag,
                                  int jobs = 1);

/// Gaussian affinity A = exp(-gamma D^2) - I. Without an explicit gamma the
/// adaptive rule gamma = 1 / (2 mu^2) with mu the mean off-diagonal distance
/// is used. all_zero is set when the affinity graph has no edges.
Matrix affinity(const DistanceMatrix& D, std::optional<double> gamma,
                double* gamma_used = nullptr, bool* all_zero = nullptr);

/// Eigenvectors of the K smallest eigenvalues of the normalized Laplacian
/// L = I - S^{-1/2} A S^{-1/2}, eigenvalues ascending. Rows are NOT yet
/// normalized here; the clustering pipeline does that before k-means.
struct SpectralEmbedding {
  Matrix vectors;     // N x K
  Vector eigenvalues; // length K, ascending
};

SpectralEmbedding spectral_embed(const Matrix& A, int K);

struct KmeansResult {
  std::vector<int> labels;
  double inertia = 0.0;
};

/// Lloyd iterations with k-means++ seeding, best inertia over restarts,
/// deterministic under a fixed seed. Empty clusters are re-seeded from the
/// point farthest from its centroid.
KmeansResult kmeans(const Matrix& points, int K, int restarts, std::uint64_t seed);

double ami(const std::vector<int>& labels_a, const std::vector<int>& labels_b);
double ari(const std::vector<int>& labels_a, const std::vector<int>& labels_b);

struct ClusterResult {
  std::vector<int> labels;
  Matrix embedding;        // N x K, row-normalized
  Vector eigenvalues;      // first K Laplacian eigenvalues, ascending
  double kmeans_inertia = 0.0;
  double gamma = 0.0;
  bool affinity_all_zero = false;
};

/// Full discrete-distribution spectral clustering on a precomputed distance
/// matrix: affinity, normalized-Laplacian embedding, row normalization,
/// k-means.
ClusterResult ddsc(const DistanceMatrix& D, int K, std::optional<double> gamma,
                   int kmeans_restarts, std::uint64_t seed);

}  // namespace mrdkit
