#pragma once

#include <string>

#include "energylab/sde.hpp"

#include <json.hpp>

namespace elab {

using json = nlohmann::ordered_json;

// Stable content hash of a config (canonical serialization).
std::string config_digest(const json& j);

// Time-series contract: '#' comment lines with seed and config digest, then
// a header row `t,E_0,...,E_{n-1}`.
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec);

void write_json_file(const std::string& path, const json& j);

json read_json_file(const std::string& path);

// Schema guard: throws if the object contains keys outside `allowed`.
void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where);

}  // namespace elab
