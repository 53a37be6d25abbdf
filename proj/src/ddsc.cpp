#include "mrdkit/ddsc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>

#include "mrdkit/linalg.hpp"
#include "mrdkit/rng.hpp"

namespace mrdkit {

DistanceMatrix pairwise_distances(const std::vector<SampleMatrix>& collection,
                                  const MetricFn& metric, const std::string& metric_tag,
                                  int jobs) {
  const int n = static_cast<int>(collection.size());
  if (n < 2) throw InvalidInputError("pairwise_distances: need at least 2 sample sets");
  for (int i = 0; i < n; ++i) check_sample_matrix(collection[i], "pairwise_distances set");

  Matrix D = Matrix::Zero(n, n);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  auto compute_range = [&](std::size_t begin, std::size_t end, std::exception_ptr& err) {
    try {
      for (std::size_t k = begin; k < end; ++k) {
        const auto [i, j] = pairs[k];
        D(i, j) = metric(collection[i], collection[j]);
      }
    } catch (...) {
      err = std::current_exception();
    }
  };

  int workers = jobs == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : jobs;
  workers = std::clamp<int>(workers, 1, static_cast<int>(pairs.size()));
  if (workers <= 1) {
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [i, j] = pairs[k];
      try {
        D(i, j) = metric(collection[i], collection[j]);
      } catch (const std::exception& e) {
        throw std::runtime_error("pairwise_distances: metric failed at (" + std::to_string(i) +
                                 ", " + std::to_string(j) + "): " + e.what());
      }
    }
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (pairs.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(pairs.size(), begin + chunk);
      if (begin >= end) break;
      threads.emplace_back(compute_range, begin, end, std::ref(errors[w]));
    }
    for (auto& t : threads) t.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  Matrix full = D + D.transpose();   // mirror the upper triangle
  full = 0.5 * (full + full.transpose());
  full.diagonal().setZero();
  return {full, metric_tag};
}

Matrix affinity(const DistanceMatrix& D, std::optional<double> gamma, double* gamma_used,
                bool* all_zero) {
  const Matrix& dist = D.values;
  const Eigen::Index n = dist.rows();
  if (n < 2 || dist.cols() != n) throw InvalidInputError("affinity: need a square N>=2 matrix");
  if (!dist.allFinite()) throw InvalidInputError("affinity: non-finite distances");

  double g;
  if (gamma) {
    g = *gamma;
  } else {
    const double mu = (dist.sum() - dist.trace()) / static_cast<double>(n * (n - 1));
    g = mu > 0.0 ? 1.0 / (2.0 * mu * mu) : 1.0;
  }
  if (gamma_used) *gamma_used = g;

  Matrix A = (-g * dist.array().square()).exp();
  A -= Matrix::Identity(n, n);
  A = 0.5 * (A + A.transpose());
  if (all_zero) *all_zero = A.cwiseAbs().maxCoeff() == 0.0;
  return A;
}

SpectralEmbedding spectral_embed(const Matrix& A, int K) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw InvalidInputError("spectral_embed: affinity must be square");
  if (K < 1 || K > n) throw InvalidInputError("spectral_embed: K must be in [1, N]");

  // Degree guard keeps S^{-1/2} defined for isolated nodes.
  Vector degrees = A.rowwise().sum().array() + 1e-12;
  Vector inv_sqrt = degrees.array().rsqrt();
  Matrix L = Matrix::Identity(n, n) - inv_sqrt.asDiagonal() * A * inv_sqrt.asDiagonal();
  L = 0.5 * (L + L.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> es(L);
  if (es.info() != Eigen::Success) throw ConvergenceError("spectral_embed: eigensolver failed");

  SpectralEmbedding out;
  out.vectors = es.eigenvectors().leftCols(K);
  out.eigenvalues = es.eigenvalues().head(K);
  return out;
}

namespace {

Matrix row_normalized(const Matrix& V) {
  Matrix out = V;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) /= norm;  // zero rows stay zero
  }
  return out;
}

KmeansResult kmeans_single(const Matrix& points, int K, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  SplitMix64 rng(seed);

  // k-means++ seeding
  Matrix centroids(K, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.next_u64() % n));
  Vector dist2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int k = 1; k < K; ++k) {
    const double total = dist2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = rng.next_uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += dist2(i);
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.next_u64() % n);
    }
    centroids.row(k) = points.row(pick);
    dist2 = dist2.cwiseMin((points.rowwise() - centroids.row(k)).rowwise().squaredNorm());
  }

  std::vector<int> labels(n, 0);
  double inertia = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 300; ++iter) {
    double new_inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_k = 0;
      for (int k = 0; k < K; ++k) {
        const double d = (points.row(i) - centroids.row(k)).squaredNorm();
        if (d < best) {
          best = d;
          best_k = k;
        }
      }
      labels[i] = best_k;
      new_inertia += best;
    }

    Matrix sums = Matrix::Zero(K, points.cols());
    std::vector<int> counts(K, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(labels[i]) += points.row(i);
      ++counts[labels[i]];
    }
    for (int k = 0; k < K; ++k) {
      if (counts[k] > 0) {
        centroids.row(k) = sums.row(k) / counts[k];
      } else {
        // Re-seed an empty cluster from the point farthest from its centroid.
        Eigen::Index farthest = 0;
        double worst = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double d = (points.row(i) - centroids.row(labels[i])).squaredNorm();
          if (d > worst) {
            worst = d;
            farthest = i;
          }
        }
        centroids.row(k) = points.row(farthest);
      }
    }

    if (std::abs(inertia - new_inertia) <= 1e-10) {
      inertia = new_inertia;
      break;
    }
    inertia = new_inertia;
  }
  return {labels, inertia};
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int K, int restarts, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (K < 1) throw InvalidInputError("kmeans: K must be >= 1");
  if (n < K) throw InvalidInputError("kmeans: need at least K points");
  if (restarts < 1) throw InvalidInputError("kmeans: restarts must be >= 1");

  KmeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    KmeansResult run = kmeans_single(points, K, SplitMix64::derive(seed, r));
    if (run.inertia < best.inertia) best = run;
  }
  return best;
}

namespace {

struct Contingency {
  std::vector<std::vector<long>> table;  // rows: clusters of a, cols: clusters of b
  std::vector<long> row_sums, col_sums;
  long n = 0;
};

Contingency contingency(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw InvalidInputError("label vectors have different lengths");
  if (a.empty()) throw InvalidInputError("label vectors are empty");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] < 0 || b[i] < 0) throw InvalidInputError("labels must be nonnegative");

  auto compress = [](const std::vector<int>& labels) {
    std::map<int, int> remap;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, inserted] = remap.emplace(labels[i], static_cast<int>(remap.size()));
      out[i] = it->second;
    }
    return std::pair{out, static_cast<int>(remap.size())};
  };
  auto [ca, ka] = compress(a);
  auto [cb, kb] = compress(b);

  Contingency c;
  c.n = static_cast<long>(a.size());
  c.table.assign(ka, std::vector<long>(kb, 0));
  c.row_sums.assign(ka, 0);
  c.col_sums.assign(kb, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++c.table[ca[i]][cb[i]];
    ++c.row_sums[ca[i]];
    ++c.col_sums[cb[i]];
  }
  return c;
}

double choose2(long n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

double entropy(const std::vector<long>& counts, long n) {
  double h = 0.0;
  for (long c : counts)
    if (c > 0) h -= (static_cast<double>(c) / n) * std::log(static_cast<double>(c) / n);
  return h;
}

double mutual_information(const Contingency& c) {
  double mi = 0.0;
  const double n = static_cast<double>(c.n);
  for (std::size_t i = 0; i < c.table.size(); ++i)
    for (std::size_t j = 0; j < c.table[i].size(); ++j) {
      const long nij = c.table[i][j];
      if (nij == 0) continue;
      mi += (nij / n) * std::log(n * nij / (static_cast<double>(c.row_sums[i]) * c.col_sums[j]));
    }
  return std::max(0.0, mi);
}

// Expected MI under the permutation (hypergeometric) model, with log-gamma
// factorials for stability.
double expected_mutual_information(const Contingency& c) {
  const long n = c.n;
  const double log_n_fact = std::lgamma(n + 1.0);
  double emi = 0.0;
  for (long ai : c.row_sums) {
    for (long bj : c.col_sums) {
      const long lo = std::max(1L, ai + bj - n);
      const long hi = std::min(ai, bj);
      for (long nij = lo; nij <= hi; ++nij) {
        const double log_p = std::lgamma(ai + 1.0) + std::lgamma(bj + 1.0) +
                             std::lgamma(n - ai + 1.0) + std::lgamma(n - bj + 1.0) -
                             log_n_fact - std::lgamma(nij + 1.0) -
                             std::lgamma(ai - nij + 1.0) - std::lgamma(bj - nij + 1.0) -
                             std::lgamma(n - ai - bj + nij + 1.0);
        const double term = (static_cast<double>(nij) / n) *
                            std::log(static_cast<double>(n) * nij /
                                     (static_cast<double>(ai) * bj));
        emi += std::exp(log_p) * term;
      }
    }
  }
  return emi;
}

}  // namespace

double ari(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
  Contingency c = contingency(labels_a, labels_b);
  double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& row : c.table)
    for (long nij : row) sum_ij += choose2(nij);
  for (long a : c.row_sums) sum_a += choose2(a);
  for (long b : c.col_sums) sum_b += choose2(b);

  const double total = choose2(c.n);
  const double expected = sum_a * sum_b / total;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;  // both partitions trivial and identical
  return (sum_ij - expected) / (max_index - expected);
}

double ami(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
  Contingency c = contingency(labels_a, labels_b);
  const double h_a = entropy(c.row_sums, c.n);
  const double h_b = entropy(c.col_sums, c.n);
  if (h_a == 0.0 && h_b == 0.0) return 1.0;  // both single-cluster partitions

  const double mi = mutual_information(c);
  const double emi = expected_mutual_information(c);
  const double denom = std::max(h_a, h_b) - emi;
  if (denom == 0.0) return mi > emi ? 1.0 : 0.0;
  return (mi - emi) / denom;
}

ClusterResult ddsc(const DistanceMatrix& D, int K, std::optional<double> gamma,
                   int kmeans_restarts, std::uint64_t seed) {
  ClusterResult out;
  Matrix A = affinity(D, gamma, &out.gamma, &out.affinity_all_zero);
  SpectralEmbedding embed = spectral_embed(A, K);
  out.embedding = row_normalized(embed.vectors);
  out.eigenvalues = embed.eigenvalues;
  KmeansResult km = kmeans(out.embedding, K, kmeans_restarts, seed);
  out.labels = std::move(km.labels);
  out.kmeans_inertia = km.inertia;
  return out;
}

}  // namespace mrdkit
