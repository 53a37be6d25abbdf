#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrdkit/types.hpp"

namespace mrdkit {

struct LabeledCollection {
  std::vector<SampleMatrix> sets;  // columns are samples
  std::vector<int> labels;
  std::vector<std::string> names;
};

/// Two noisy circles and two uniform squares, N/4 points each, 2-D.
/// Circles sit at the origin and at (+2,+2) with N(0, 0.01) jitter; squares
/// are 1.5 * Uniform(0,1) boxes offset to (+1.5,-1) and (-1,+1.5).
LabeledCollection gen_polygons(int N, double radius, std::uint64_t seed);

/// Two interleaved spiral arms, N/2 points each, with N(0, 0.64) jitter.
LabeledCollection gen_spiral(int N, std::uint64_t seed);

/// K * per_cluster sample sets; sets of cluster k are drawn from
/// N(mu_k, spread^2 I) with pairwise mean separation >= separation.
LabeledCollection gen_gaussian_clouds(int K, int per_cluster, int points_per_set, int dim,
                                      double separation, double spread, std::uint64_t seed);

/// X plus i.i.d. N(0, sigma^2) entries.
SampleMatrix perturb(const SampleMatrix& X, double sigma, std::uint64_t seed);

enum class Layout { RowsAreSamples, ColumnsAreSamples };

struct ManifestItem {
  std::string path;
  std::optional<int> label;
  std::optional<std::string> name;
};

struct Manifest {
  std::vector<ManifestItem> items;
  Layout layout = Layout::RowsAreSamples;
};

Manifest load_manifest(const std::string& path);
void save_manifest(const Manifest& manifest, const std::string& path);

/// CSV matrix load. A non-numeric first line is treated as a header and
/// skipped. RowsAreSamples input is transposed so that columns are samples
/// internally.
Matrix load_matrix_csv(const std::string& path, Layout layout = Layout::RowsAreSamples);

/// CSV write with 17 significant digits (lossless double round-trip).
void save_matrix_csv(const Matrix& M, const std::string& path,
                     Layout layout = Layout::RowsAreSamples);

/// Loads every item of a manifest; relative paths resolve against the
/// manifest's directory (or base_dir when given).
LabeledCollection load_collection(const Manifest& manifest, const std::string& base_dir = "");

namespace detail {

// Spiral-arm geometry, separated from sampling so the formulas are testable.
inline double spiral_angle(double theta) { return 4.0 * M_PI * std::sqrt(theta); }
inline double spiral_radius(double angle, int arm) {
  return arm == 0 ? 2.0 * angle + M_PI : -2.0 * angle - M_PI;
}

}  // namespace detail

}  // namespace mrdkit
