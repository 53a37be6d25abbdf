#include "mrdkit/data_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mrdkit/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace mrdkit {

LabeledCollection gen_polygons(int N, double radius, std::uint64_t seed) {
  if (N < 4 || N % 4 != 0) throw InvalidInputError("gen_polygons: N must be >= 4 and divisible by 4");
  if (radius <= 0.0) throw InvalidInputError("gen_polygons: radius must be > 0");
  const int n = N / 4;
  SplitMix64 rng(seed);

  auto circle = [&](double cx, double cy) {
    SampleMatrix X(2, n);
    for (int j = 0; j < n; ++j) {
      const double c = 2.0 * M_PI * rng.next_uniform();
      X(0, j) = radius * std::cos(c) + cx + 0.1 * rng.next_normal();
      X(1, j) = radius * std::sin(c) + cy + 0.1 * rng.next_normal();
    }
    return X;
  };
  auto square = [&](double ox, double oy) {
    SampleMatrix X(2, n);
    for (int j = 0; j < n; ++j) {
      X(0, j) = 1.5 * rng.next_uniform() + ox;
      X(1, j) = 1.5 * rng.next_uniform() + oy;
    }
    return X;
  };

  LabeledCollection out;
  out.sets = {circle(0.0, 0.0), circle(2.0, 2.0), square(1.5, -1.0), square(-1.0, 1.5)};
  out.labels = {0, 1, 2, 3};
  out.names = {"circle_lower_left", "circle_upper_right", "square_lower_right",
               "square_upper_left"};
  return out;
}

LabeledCollection gen_spiral(int N, std::uint64_t seed) {
  if (N < 2 || N % 2 != 0) throw InvalidInputError("gen_spiral: N must be even and >= 2");
  const int n = N / 2;
  SplitMix64 rng(seed);

  LabeledCollection out;
  out.sets.assign(2, SampleMatrix(2, n));
  for (int j = 0; j < n; ++j) {
    const double angle = detail::spiral_angle(rng.next_uniform());
    for (int arm = 0; arm < 2; ++arm) {
      const double r = detail::spiral_radius(angle, arm);
      out.sets[arm](0, j) = r * std::cos(angle) + 0.8 * rng.next_normal();
      out.sets[arm](1, j) = r * std::sin(angle) + 0.8 * rng.next_normal();
    }
  }
  out.labels = {0, 1};
  out.names = {"spiral_arm_0", "spiral_arm_1"};
  return out;
}

LabeledCollection gen_gaussian_clouds(int K, int per_cluster, int points_per_set, int dim,
                                      double separation, double spread, std::uint64_t seed) {
  if (K < 1 || per_cluster < 1 || points_per_set < 1 || dim < 1)
    throw InvalidInputError("gen_gaussian_clouds: counts must be >= 1");
  if (separation <= 0.0 || spread <= 0.0)
    throw InvalidInputError("gen_gaussian_clouds: separation and spread must be > 0");

  // Deterministic mean placement: mu_k = k * separation * e_{k mod dim},
  // which keeps every pair at least `separation` apart.
  std::vector<Vector> means(K, Vector::Zero(dim));
  for (int k = 0; k < K; ++k) means[k](k % dim) = static_cast<double>(k) * separation;

  SplitMix64 rng(seed);
  LabeledCollection out;
  for (int k = 0; k < K; ++k) {
    for (int s = 0; s < per_cluster; ++s) {
      SampleMatrix X(dim, points_per_set);
      for (int j = 0; j < points_per_set; ++j)
        for (int d = 0; d < dim; ++d) X(d, j) = means[k](d) + spread * rng.next_normal();
      out.sets.push_back(std::move(X));
      out.labels.push_back(k);
      out.names.push_back("cluster" + std::to_string(k) + "_set" + std::to_string(s));
    }
  }
  return out;
}

SampleMatrix perturb(const SampleMatrix& X, double sigma, std::uint64_t seed) {
  check_sample_matrix(X, "perturb input");
  if (sigma < 0.0) throw InvalidInputError("perturb: sigma must be >= 0");
  if (sigma == 0.0) return X;

  SplitMix64 rng(seed);
  SampleMatrix out = X;
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) += sigma * rng.next_normal();
  return out;
}

namespace {

bool parse_double(const std::string& token, double& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && begin != end;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> tokens;
  std::string token;
  std::stringstream ss(line);
  while (std::getline(ss, token, ',')) tokens.push_back(token);
  if (!line.empty() && line.back() == ',') tokens.emplace_back();
  return tokens;
}

}  // namespace

Matrix load_matrix_csv(const std::string& path, Layout layout) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto tokens = split_csv_line(line);
    std::vector<double> row(tokens.size());
    bool numeric = true;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!parse_double(tokens[i], row[i])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first_content_line) {  // header row
        first_content_line = false;
        continue;
      }
      throw IoError(path + ":" + std::to_string(line_no) + ": non-numeric cell");
    }
    first_content_line = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError(path + ":" + std::to_string(line_no) + ": ragged row (" +
                    std::to_string(row.size()) + " cells, expected " +
                    std::to_string(rows.front().size()) + ")");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(path + ": no numeric data");

  Matrix M(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j) M(i, j) = rows[i][j];
  if (!M.allFinite()) throw IoError(path + ": non-finite value");

  return layout == Layout::RowsAreSamples ? Matrix(M.transpose()) : M;
}

void save_matrix_csv(const Matrix& M, const std::string& path, Layout layout) {
  const Matrix out = layout == Layout::RowsAreSamples ? Matrix(M.transpose()) : M;
  std::ofstream file(path);
  if (!file) throw IoError("cannot write file: " + path);
  char buf[64];
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", out(i, j));
      file << buf;
      if (j + 1 < out.cols()) file << ',';
    }
    file << '\n';
  }
  if (!file.good()) throw IoError("write failed: " + path);
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("manifest parse error in " + path + ": " + e.what());
  }

  Manifest m;
  const std::string layout = j.value("layout", "rows");
  if (layout == "rows")
    m.layout = Layout::RowsAreSamples;
  else if (layout == "columns")
    m.layout = Layout::ColumnsAreSamples;
  else
    throw IoError(path + ": layout must be \"rows\" or \"columns\"");

  if (!j.contains("items") || !j["items"].is_array())
    throw IoError(path + ": manifest needs an \"items\" array");
  for (const auto& item : j["items"]) {
    ManifestItem mi;
    if (!item.contains("path")) throw IoError(path + ": manifest item without \"path\"");
    mi.path = item["path"].get<std::string>();
    if (item.contains("label")) mi.label = item["label"].get<int>();
    if (item.contains("name")) mi.name = item["name"].get<std::string>();
    m.items.push_back(std::move(mi));
  }
  return m;
}

void save_manifest(const Manifest& manifest, const std::string& path) {
  json j;
  j["layout"] = manifest.layout == Layout::RowsAreSamples ? "rows" : "columns";
  j["items"] = json::array();
  for (const auto& item : manifest.items) {
    json ji;
    ji["path"] = item.path;
    if (item.label) ji["label"] = *item.label;
    if (item.name) ji["name"] = *item.name;
    j["items"].push_back(std::move(ji));
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << j.dump(2) << '\n';
}

LabeledCollection load_collection(const Manifest& manifest, const std::string& base_dir) {
  if (manifest.items.empty()) throw IoError("manifest has no items");

  LabeledCollection out;
  Eigen::Index dim = -1;
  for (const auto& item : manifest.items) {
    fs::path p(item.path);
    if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
    Matrix X = load_matrix_csv(p.string(), manifest.layout);
    if (dim < 0) dim = X.rows();
    if (X.rows() != dim)
      throw IoError(p.string() + ": feature dimension " + std::to_string(X.rows()) +
                    " differs from the collection's " + std::to_string(dim));
    out.sets.push_back(std::move(X));
    out.labels.push_back(item.label.value_or(-1));
    out.names.push_back(item.name.value_or(item.path));
  }
  return out;
}

}  // namespace mrdkit
