#include "mrdkit/report_io.hpp"

#include <fstream>

namespace mrdkit {

using nlohmann::json;

json to_json(const MrdResult& result) {
  return {{"distance", result.distance},     {"s12_norm2", result.s12_norm2},
          {"s21_norm2", result.s21_norm2},   {"lambda12", result.lambda12},
          {"lambda21", result.lambda21},     {"residual12", result.residual12},
          {"residual21", result.residual21}};
}

json to_json(const ClusterResult& result) {
  json embedding = json::array();
  for (Eigen::Index i = 0; i < result.embedding.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < result.embedding.cols(); ++j) row.push_back(result.embedding(i, j));
    embedding.push_back(std::move(row));
  }
  json eigenvalues = json::array();
  for (Eigen::Index i = 0; i < result.eigenvalues.size(); ++i)
    eigenvalues.push_back(result.eigenvalues(i));

  return {{"labels", result.labels},
          {"embedding", embedding},
          {"eigenvalues", eigenvalues},
          {"kmeans_inertia", result.kmeans_inertia},
          {"gamma", result.gamma},
          {"affinity_all_zero", result.affinity_all_zero}};
}

json to_json(const RobustnessReport& report) {
  json j = {{"kind", report.kind},
            {"trials", report.trials},
            {"sigma", report.sigma},
            {"t", report.t},
            {"bound", report.bound},
            {"allowed_rate", report.allowed_rate},
            {"deltas", report.deltas},
            {"violations", report.violations},
            {"violation_rate", report.violation_rate},
            {"clean_distance", report.clean_distance},
            {"gap_allowance_rel", report.gap_allowance_rel}};
  if (report.kind == "kernel") {
    j["eps"] = report.eps;
    j["bandwidth"] = report.bandwidth;
    j["eps_blocks"] = report.eps_blocks;
  }
  return j;
}

void save_report(const json& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report: " + path);
  out << report.dump(2) << '\n';
  if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace mrdkit
