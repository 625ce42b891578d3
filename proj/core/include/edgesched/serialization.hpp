#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "edgesched/arl/agent.hpp"
#include "edgesched/rl/qnetwork.hpp"
#include "edgesched/scenario.hpp"
#include "edgesched/schedule.hpp"

namespace edgesched {

// Scenario file:
//   { "format": "edgesched-scenario", "version": 1, "seed": int,
//     "criticality_map": { "<Service>": rank, ... },
//     "topology": { "zones": [int], "links": [[a, b, latency_ms, bandwidth_mbps]],
//                   "server_zones": [int], "wireless_latency_ms": x,
//                   "bandwidth_mbps": x, "provisioning_setup_s": x },
//     "servers": [ { "id", "zone", "model", "cpu_freq_hz", "cores", "ram_mb", "storage_mb" } ],
//     "users": [ { "id", "zone", "service", "workload": [ {
//         "id", "user", "arrival_s", "period_s", "deadline_s", "cpu_cycles_per_mb",
//         "ram_mb", "storage_mb", "predecessor": int|null, "criticality_rank" } ] } ] }
nlohmann::json scenario_to_json(const Scenario& scenario);
/// Throws Error{InvalidSpec} on schema or invariant violations.
Scenario scenario_from_json(const nlohmann::json& doc);

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
/// Throws Error{IoError} when the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

/// { "assignments": [ {"task": id, "server": id} ], "hit_ratio": x, "hit_tasks": n,
///   "placed": n, "provisioning_s": x }
nlohmann::json schedule_to_json(const Schedule& schedule, const Scenario& scenario);
Schedule schedule_from_json(const nlohmann::json& doc, const Scenario& scenario);

// Network checkpoint: { "format": "edgesched-qnetwork", "version": 1,
//   "layers": [ { "inputs", "outputs", "weights": [...], "bias": [...] } ] }
nlohmann::json qnetwork_to_json(const rl::QNetwork& net);
rl::QNetwork qnetwork_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const rl::DqnHyperparams& hyper);
nlohmann::json to_json(const arl::RewardConfig& reward);
nlohmann::json to_json(const arl::AgentConfig& config);
nlohmann::json to_json(const arl::ConvergenceConfig& config);

/// Applies any keys present in `doc` on top of `base`. Unknown keys raise
/// Error{InvalidConfig}.
arl::AgentConfig agent_config_from_json(const nlohmann::json& doc, arl::AgentConfig base = {});
arl::ConvergenceConfig convergence_from_json(const nlohmann::json& doc, arl::ConvergenceConfig base = {});

/// Deterministic part of a training run: config echo, per-episode series,
/// best schedule. Wall-clock values are left out.
nlohmann::json train_result_to_json(const arl::TrainResult& result, const Scenario& scenario);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

} // namespace edgesched
