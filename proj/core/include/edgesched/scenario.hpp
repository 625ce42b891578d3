#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "edgesched/topology.hpp"
#include "edgesched/types.hpp"

namespace edgesched {

/// Full problem instance: users with their workloads, servers, network and
/// service criticality. Immutable once constructed.
class Scenario {
public:
  /// Validates every task, server, user and topology invariant and throws
  /// Error{InvalidSpec} on the first violation.
  Scenario(std::vector<EdgeUser> users, std::vector<EdgeServer> servers, Topology topology,
           CriticalityMap criticality, std::int64_t seed);

  [[nodiscard]] const std::vector<EdgeUser>& users() const noexcept { return users_; }
  [[nodiscard]] const std::vector<EdgeServer>& servers() const noexcept { return servers_; }
  [[nodiscard]] const Topology& topology() const noexcept { return topology_; }
  [[nodiscard]] const CriticalityMap& criticality_map() const noexcept { return criticality_; }
  [[nodiscard]] std::int64_t seed() const noexcept { return seed_; }

  /// Every task, ordered by (user id, task id). Indices into this vector are
  /// the task indices used throughout the library.
  [[nodiscard]] const std::vector<Task>& tasks() const noexcept { return tasks_; }
  [[nodiscard]] std::size_t num_tasks() const noexcept { return tasks_.size(); }
  [[nodiscard]] std::size_t num_servers() const noexcept { return servers_.size(); }

  [[nodiscard]] std::size_t task_index(TaskId id) const;     // Error{NotFound}
  [[nodiscard]] std::size_t server_index(ServerId id) const; // Error{NotFound}
  [[nodiscard]] std::size_t user_index(UserId id) const;     // Error{NotFound}

  [[nodiscard]] const EdgeUser& owner(std::size_t task) const { return users_[task_owner_[task]]; }
  [[nodiscard]] std::size_t owner_index(std::size_t task) const { return task_owner_[task]; }
  [[nodiscard]] std::optional<std::size_t> predecessor_index(std::size_t task) const;
  [[nodiscard]] int rank_of(std::size_t task) const { return tasks_[task].criticality_rank; }

  friend bool operator==(const Scenario& lhs, const Scenario& rhs) noexcept;

private:
  std::vector<EdgeUser> users_;
  std::vector<EdgeServer> servers_;
  Topology topology_;
  CriticalityMap criticality_{kDefaultCriticality};
  std::int64_t seed_ = 0;

  std::vector<Task> tasks_;
  std::vector<std::size_t> task_owner_;
  std::vector<std::ptrdiff_t> predecessor_; // -1 when absent
  std::unordered_map<TaskId, std::size_t> task_index_;
  std::unordered_map<ServerId, std::size_t> server_index_;
  std::unordered_map<UserId, std::size_t> user_index_;
};

/// Concatenation of all workloads; same order as Scenario::tasks().
std::vector<Task> all_tasks(const Scenario& scenario);

// ---------------------------------------------------------------------------
// Generation

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct TaskTemplate {
  std::string name;
  Range cpu_cycles_per_mb;
  Range ram_mb;
  Range storage_mb;
  Range deadline_s;
  double period_factor = 1.0; ///< period = factor * deadline
};

struct ServiceTemplate {
  Service service = Service::CrowdCounting;
  std::vector<TaskTemplate> tasks;
  bool chained = true; ///< each task depends on the previous one of its workload
};

struct ServerSpec {
  std::string model;
  double cpu_freq_hz = 0.0;
  int cores = 1;
  double ram_mb = 0.0;
  double storage_mb = 0.0;
  std::optional<ZoneId> zone; ///< random distinct zone when unset
};

/// Service workload templates plus a server hardware catalog, loaded from
/// `core/data/service_templates.json` (compiled in as the default).
class ServiceCatalog {
public:
  static ServiceCatalog from_json_text(std::string_view text);
  static const ServiceCatalog& builtin();

  [[nodiscard]] const ServiceTemplate& service(Service service) const;
  [[nodiscard]] ServerSpec server_model(std::string_view name) const; // Error{NotFound}
  [[nodiscard]] std::vector<std::string> server_model_names() const;

private:
  std::vector<ServiceTemplate> services_;
  std::vector<std::pair<std::string, ServerSpec>> servers_;
};

struct TopologySpec {
  double link_latency_ms = 1.0;
  double wireless_latency_ms = 2.0;
  double bandwidth_mbps = 100.0;
  /// Per-link bandwidth is drawn from this list when non-empty.
  std::vector<double> link_bandwidth_choices;
  /// Extra links beyond the random spanning tree, as a fraction of zone count.
  double extra_link_fraction = 0.5;
  double provisioning_setup_s = 0.0;
};

struct ScenarioSpec {
  std::array<int, kServiceCount> users_per_service{};
  int zone_count = 1;
  std::vector<ServerSpec> servers;
  TopologySpec topology;
  CriticalityMap criticality{kDefaultCriticality};
  /// Users spread evenly over zones instead of uniformly at random.
  bool spread_users = false;
  std::int64_t seed = 0;
};

/// Deterministic in (spec, seed). Throws Error{InvalidSpec} for zero users,
/// zero servers, zone_count < 1, or more pinned server zones than exist.
Scenario generate_scenario(const ScenarioSpec& spec,
                           const ServiceCatalog& catalog = ServiceCatalog::builtin());

/// "paper": 22 zones, TX2 x2 + Xeon E5430 + Xeon E5645, 44/6/1/1 users.
/// "desk": ~20 tasks on 4 heterogeneous servers, 6 zones.
/// "tiny": 2 users, 2 servers, 2 zones.
ScenarioSpec preset(std::string_view name, std::int64_t seed = 0);
std::vector<std::string> preset_names();

} // namespace edgesched
