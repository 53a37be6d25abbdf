#pragma once

#include <string>

#include <json.hpp>

#include "mrdkit/ddsc.hpp"
#include "mrdkit/mrd.hpp"
#include "mrdkit/robustness.hpp"

namespace mrdkit {

nlohmann::json to_json(const MrdResult& result);
nlohmann::json to_json(const ClusterResult& result);
nlohmann::json to_json(const RobustnessReport& report);

void save_report(const nlohmann::json& report, const std::string& path);

}  // namespace mrdkit
