#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "edgesched/scenario.hpp"
#include "edgesched/schedule.hpp"

namespace edgesched {

inline constexpr double kDefaultUtilizationThreshold = 0.8;

/// Processor, RAM and storage fractions. Used both for a server's current
/// load and for the increment a single task adds.
struct Utilization {
  double cpu = 0.0;
  double ram = 0.0;
  double storage = 0.0;

  Utilization& operator+=(const Utilization& rhs) noexcept {
    cpu += rhs.cpu;
    ram += rhs.ram;
    storage += rhs.storage;
    return *this;
  }
  friend Utilization operator+(Utilization lhs, const Utilization& rhs) noexcept { return lhs += rhs; }
  friend bool operator==(const Utilization&, const Utilization&) = default;
};

struct ServerLoad {
  ServerId server_id;
  Utilization util;
  std::vector<TaskId> assigned;

  friend bool operator==(const ServerLoad&, const ServerLoad&) = default;
};

struct FeasibilityReport {
  bool single_assignment_ok = false; ///< task not yet placed
  bool capacity_ok = false;          ///< load + task demand < 1 on every axis
  bool availability_ok = false;      ///< load < threshold on every axis
  bool deadline_ok = false;          ///< response time <= deadline
  double response_time_s = 0.0;

  [[nodiscard]] bool placeable() const noexcept {
    return single_assignment_ok && capacity_ok && availability_ok;
  }
};

/// Four additive parts of a response time, in seconds.
struct ResponseBreakdown {
  double execution = 0.0;
  double provisioning = 0.0;
  double rtt_user_server = 0.0;
  double rtt_inter_task = 0.0;

  [[nodiscard]] double total() const noexcept {
    return execution + provisioning + rtt_user_server + rtt_inter_task;
  }
};

/// (cycles/MB * MB) / (F * N).
double execution_time(const Task& task, const EdgeServer& server) noexcept;

/// Execution time over the absolute deadline.
double task_cpu_utilization(const Task& task, const EdgeServer& server) noexcept;

/// Utilization increment of placing `task` on `server`.
Utilization task_demand(const Task& task, const EdgeServer& server) noexcept;

/// Response time of task index `task` on server index `server`. The inter-task
/// term uses the predecessor's placement in `schedule` as it stands.
ResponseBreakdown response_breakdown(const Scenario& scenario, std::size_t task, std::size_t server,
                                     const Schedule& schedule);
double response_time(const Scenario& scenario, std::size_t task, std::size_t server,
                     const Schedule& schedule);

ServerLoad server_load(const Schedule& schedule, std::size_t server, const Scenario& scenario);
std::vector<ServerLoad> server_loads(const Schedule& schedule, const Scenario& scenario);

/// Evaluates the four placement constraints against `load` (the current load
/// of `server`). Pure.
FeasibilityReport check_assignment(const Scenario& scenario, std::size_t task, std::size_t server,
                                   const Schedule& schedule, const Utilization& load,
                                   double utilization_threshold);

/// Id-based form; loads are recomputed from the schedule. Throws Error{NotFound}
/// for unknown ids and Error{InvalidConfig} unless 0 < threshold <= 1.
FeasibilityReport check_assignment(const Scenario& scenario, TaskId task, ServerId server,
                                   const Schedule& schedule, double utilization_threshold);

/// True when `task` on `server` meets its deadline given the final placement
/// of its predecessor in `schedule`.
bool task_hits(const Scenario& scenario, std::size_t task, const Schedule& schedule);

/// Number of tasks placed in `schedule` that meet their deadline.
std::size_t hit_task_count(const Scenario& scenario, const Schedule& schedule);

/// Fraction of users whose every task is placed and meets its deadline.
/// Unplaced tasks are misses.
double hit_ratio(const Schedule& schedule, const Scenario& scenario);

/// Whether some placement order of `tasks` on `server` passes the sequential
/// availability and capacity checks. A set is feasible iff its total stays
/// below 1 on every axis and, for some member placed last, the load before it
/// stays below the threshold on every axis.
bool server_set_feasible(const Scenario& scenario, std::size_t server,
                         const std::vector<std::size_t>& tasks, double utilization_threshold);

struct OptimumResult {
  Schedule schedule;
  double hit_ratio = 0.0;
  std::uint64_t evaluated = 0;
};

/// Exhaustive search over every assignment function (each task on one server
/// or unplaced). Throws Error{TooLarge} when (|S|+1)^|T| exceeds `limit`.
/// Ties go to the lexicographically smallest choice vector, where choice 0 is
/// "unplaced" and choice k+1 is server k. The returned schedule lists
/// placements in earliest-deadline order.
OptimumResult brute_force_optimum(const Scenario& scenario, double utilization_threshold,
                                  std::uint64_t limit = 10'000'000);

/// Earliest-deadline order of task indices: deadline, then rank, then task id.
std::vector<std::size_t> deadline_order(const Scenario& scenario);

/// Σ t_prov over placed tasks, the simulated cost of provisioning `schedule`.
double provisioning_total(const Scenario& scenario, const Schedule& schedule);

} // namespace edgesched
