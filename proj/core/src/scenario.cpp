#include "edgesched/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "edgesched/errors.hpp"
#include "edgesched/random.hpp"

namespace edgesched {

namespace {

constexpr std::array<std::string_view, kServiceCount> kServiceNames{
    "CrowdCounting", "FaceRecognition", "MLDevCrowd", "MLDevFace"};

std::string task_name(const Task& task) { return "task " + std::to_string(task.id.value); }

void validate_task(const Task& task, const EdgeUser& user, int expected_rank) {
  const auto bad = [&](const std::string& why) {
    raise(ErrorCode::InvalidSpec, task_name(task) + ": " + why);
  };
  if (task.user != user.id) bad("belongs to another user");
  if (!(task.deadline_s > 0.0) || !std::isfinite(task.deadline_s)) bad("deadline must be > 0");
  if (!(task.cpu_cycles_per_mb > 0.0) || !std::isfinite(task.cpu_cycles_per_mb)) bad("cpu demand must be > 0");
  if (!(task.ram_mb > 0.0) || !std::isfinite(task.ram_mb)) bad("ram must be > 0");
  if (!(task.storage_mb >= 0.0) || !std::isfinite(task.storage_mb)) bad("storage must be >= 0");
  if (!(task.arrival_s >= 0.0) || !std::isfinite(task.arrival_s)) bad("arrival must be >= 0");
  if (!(task.period_s == 0.0 || task.period_s >= task.deadline_s)) bad("period must be 0 or >= deadline");
  if (task.criticality_rank != expected_rank) bad("criticality rank disagrees with service map");
}

double quantize(double value, double step) { return std::round(value / step) * step; }

} // namespace

std::string_view to_string(Service service) noexcept {
  return kServiceNames[static_cast<std::size_t>(service)];
}

Service service_from_string(std::string_view name) {
  for (Service s : kAllServices) {
    if (to_string(s) == name) return s;
  }
  raise(ErrorCode::InvalidSpec, "unknown service '" + std::string(name) + "'");
}

Scenario::Scenario(std::vector<EdgeUser> users, std::vector<EdgeServer> servers, Topology topology,
                   CriticalityMap criticality, std::int64_t seed)
    : users_(std::move(users)),
      servers_(std::move(servers)),
      topology_(std::move(topology)),
      criticality_(criticality),
      seed_(seed) {
  if (users_.empty()) raise(ErrorCode::InvalidSpec, "scenario has no users");
  if (servers_.empty()) raise(ErrorCode::InvalidSpec, "scenario has no servers");
  if (!topology_.connected()) raise(ErrorCode::InvalidSpec, "topology is not connected");

  CriticalityMap sorted = criticality_;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != CriticalityMap{1, 2, 3, 4})
    raise(ErrorCode::InvalidSpec, "criticality map must be a permutation of 1..4");

  for (std::size_t k = 0; k < servers_.size(); ++k) {
    const EdgeServer& s = servers_[k];
    const std::string name = "server " + std::to_string(s.id.value);
    if (!server_index_.emplace(s.id, k).second) raise(ErrorCode::InvalidSpec, "duplicate " + name);
    if (!(s.cpu_freq_hz > 0.0) || s.cores < 1 || !(s.ram_mb > 0.0) || !(s.storage_mb > 0.0))
      raise(ErrorCode::InvalidSpec, name + " needs F > 0, N >= 1, M > 0, L > 0");
    const auto& sz = topology_.server_zones();
    if (std::find(sz.begin(), sz.end(), s.zone) == sz.end())
      raise(ErrorCode::InvalidSpec, name + " sits in a zone not listed as a server zone");
  }

  std::vector<std::pair<std::size_t, std::size_t>> order; // (user index, position in workload)
  for (std::size_t u = 0; u < users_.size(); ++u) {
    const EdgeUser& user = users_[u];
    if (!user_index_.emplace(user.id, u).second)
      raise(ErrorCode::InvalidSpec, "duplicate user " + std::to_string(user.id.value));
    if (!topology_.has_zone(user.zone))
      raise(ErrorCode::InvalidSpec, "user " + std::to_string(user.id.value) + " in unknown zone");
    if (user.workload.empty())
      raise(ErrorCode::InvalidSpec, "user " + std::to_string(user.id.value) + " has an empty workload");
    for (std::size_t p = 0; p < user.workload.size(); ++p) {
      validate_task(user.workload[p], user, criticality_rank(user.service, criticality_));
      order.emplace_back(u, p);
    }
  }
  std::sort(order.begin(), order.end(), [&](const auto& lhs, const auto& rhs) {
    const Task& a = users_[lhs.first].workload[lhs.second];
    const Task& b = users_[rhs.first].workload[rhs.second];
    return std::tie(a.user, a.id) < std::tie(b.user, b.id);
  });

  tasks_.reserve(order.size());
  for (const auto& [u, p] : order) {
    const Task& task = users_[u].workload[p];
    if (!task_index_.emplace(task.id, tasks_.size()).second)
      raise(ErrorCode::InvalidSpec, "duplicate " + task_name(task));
    tasks_.push_back(task);
    task_owner_.push_back(u);
  }
  predecessor_.assign(tasks_.size(), -1);
  for (std::size_t j = 0; j < tasks_.size(); ++j) {
    const auto& pred = tasks_[j].predecessor;
    if (!pred) continue;
    const auto it = task_index_.find(*pred);
    if (it == task_index_.end() || tasks_[it->second].user != tasks_[j].user || it->second == j)
      raise(ErrorCode::InvalidSpec, task_name(tasks_[j]) + ": predecessor must be another task of the same user");
    predecessor_[j] = static_cast<std::ptrdiff_t>(it->second);
  }
}

std::size_t Scenario::task_index(TaskId id) const {
  const auto it = task_index_.find(id);
  if (it == task_index_.end()) raise(ErrorCode::NotFound, "task " + std::to_string(id.value));
  return it->second;
}

std::size_t Scenario::server_index(ServerId id) const {
  const auto it = server_index_.find(id);
  if (it == server_index_.end()) raise(ErrorCode::NotFound, "server " + std::to_string(id.value));
  return it->second;
}

std::size_t Scenario::user_index(UserId id) const {
  const auto it = user_index_.find(id);
  if (it == user_index_.end()) raise(ErrorCode::NotFound, "user " + std::to_string(id.value));
  return it->second;
}

std::optional<std::size_t> Scenario::predecessor_index(std::size_t task) const {
  const auto p = predecessor_[task];
  if (p < 0) return std::nullopt;
  return static_cast<std::size_t>(p);
}

bool operator==(const Scenario& lhs, const Scenario& rhs) noexcept {
  return lhs.users_ == rhs.users_ && lhs.servers_ == rhs.servers_ &&
         lhs.topology_ == rhs.topology_ && lhs.criticality_ == rhs.criticality_ &&
         lhs.seed_ == rhs.seed_;
}

std::vector<Task> all_tasks(const Scenario& scenario) { return scenario.tasks(); }

// ---------------------------------------------------------------------------

Scenario generate_scenario(const ScenarioSpec& spec, const ServiceCatalog& catalog) {
  const int total_users = std::accumulate(spec.users_per_service.begin(), spec.users_per_service.end(), 0);
  if (std::any_of(spec.users_per_service.begin(), spec.users_per_service.end(),
                  [](int n) { return n < 0; }))
    raise(ErrorCode::InvalidSpec, "negative user count");
  if (total_users == 0) raise(ErrorCode::InvalidSpec, "spec has zero users");
  if (spec.servers.empty()) raise(ErrorCode::InvalidSpec, "spec has zero servers");
  if (spec.zone_count < 1) raise(ErrorCode::InvalidSpec, "zone_count must be >= 1");

  Rng rng(spec.seed);
  const auto zone_count = static_cast<std::size_t>(spec.zone_count);
  const TopologySpec& ts = spec.topology;

  std::vector<ZoneId> zones(zone_count);
  for (std::size_t z = 0; z < zone_count; ++z) zones[z] = ZoneId{static_cast<std::uint32_t>(z)};

  const auto draw_bandwidth = [&] {
    if (ts.link_bandwidth_choices.empty()) return ts.bandwidth_mbps;
    return ts.link_bandwidth_choices[rng.below(ts.link_bandwidth_choices.size())];
  };

  // Random spanning tree, then extra chords for a partial mesh.
  std::vector<Link> links;
  std::set<std::pair<std::uint32_t, std::uint32_t>> linked;
  for (std::size_t z = 1; z < zone_count; ++z) {
    const auto parent = static_cast<std::uint32_t>(rng.below(z));
    links.push_back({ZoneId{parent}, zones[z], ts.link_latency_ms, draw_bandwidth()});
    linked.emplace(parent, static_cast<std::uint32_t>(z));
  }
  const std::size_t max_links = zone_count * (zone_count - 1) / 2;
  std::size_t extra = static_cast<std::size_t>(std::llround(ts.extra_link_fraction * static_cast<double>(zone_count)));
  extra = std::min(extra, max_links - links.size());
  for (std::size_t added = 0, attempts = 0; added < extra && attempts < 1000 * (extra + 1); ++attempts) {
    auto a = static_cast<std::uint32_t>(rng.below(zone_count));
    auto b = static_cast<std::uint32_t>(rng.below(zone_count));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!linked.emplace(a, b).second) continue;
    links.push_back({ZoneId{a}, ZoneId{b}, ts.link_latency_ms, draw_bandwidth()});
    ++added;
  }

  // Servers: pinned zones first, then distinct random zones while any remain.
  std::set<std::uint32_t> used;
  for (const ServerSpec& s : spec.servers) {
    if (!s.zone) continue;
    if (s.zone->value >= zone_count) raise(ErrorCode::InvalidSpec, "pinned server zone out of range");
    used.insert(s.zone->value);
  }
  std::vector<EdgeServer> servers;
  std::vector<ZoneId> server_zones;
  for (std::size_t k = 0; k < spec.servers.size(); ++k) {
    const ServerSpec& s = spec.servers[k];
    ZoneId zone;
    if (s.zone) {
      zone = *s.zone;
    } else {
      std::vector<std::uint32_t> free;
      for (std::uint32_t z = 0; z < zone_count; ++z)
        if (!used.contains(z)) free.push_back(z);
      zone = free.empty() ? ZoneId{static_cast<std::uint32_t>(rng.below(zone_count))}
                          : ZoneId{free[rng.below(free.size())]};
      used.insert(zone.value);
    }
    servers.push_back({ServerId{static_cast<std::uint32_t>(k)}, zone, s.model, s.cpu_freq_hz, s.cores,
                       s.ram_mb, s.storage_mb});
    if (std::find(server_zones.begin(), server_zones.end(), zone) == server_zones.end())
      server_zones.push_back(zone);
  }
  std::sort(server_zones.begin(), server_zones.end());

  const auto user_total = static_cast<std::size_t>(total_users);
  // Spread mode deals zones round-robin and shuffles the deal, so zone
  // populations differ by at most one.
  std::vector<ZoneId> spread_zones;
  if (spec.spread_users) {
    for (std::size_t i : rng.sample_indices(user_total, user_total)) spread_zones.push_back(zones[i % zone_count]);
  }

  std::vector<EdgeUser> users;
  std::uint32_t next_user = 0;
  std::uint32_t next_task = 0;
  for (Service service : kAllServices) {
    const ServiceTemplate& tmpl = catalog.service(service);
    const int rank = criticality_rank(service, spec.criticality);
    for (int i = 0; i < spec.users_per_service[static_cast<std::size_t>(service)]; ++i) {
      EdgeUser user;
      user.id = UserId{next_user++};
      user.zone = spec.spread_users ? spread_zones[next_user - 1] : zones[rng.below(zone_count)];
      user.service = service;
      std::optional<TaskId> previous;
      for (const TaskTemplate& tt : tmpl.tasks) {
        Task task;
        task.id = TaskId{next_task++};
        task.user = user.id;
        task.cpu_cycles_per_mb = quantize(rng.uniform(tt.cpu_cycles_per_mb.lo, tt.cpu_cycles_per_mb.hi), 1e4);
        task.ram_mb = quantize(rng.uniform(tt.ram_mb.lo, tt.ram_mb.hi), 0.01);
        task.storage_mb = quantize(rng.uniform(tt.storage_mb.lo, tt.storage_mb.hi), 0.01);
        task.deadline_s = quantize(rng.uniform(tt.deadline_s.lo, tt.deadline_s.hi), 1e-3);
        task.period_s = tt.period_factor * task.deadline_s;
        task.criticality_rank = rank;
        if (tmpl.chained) task.predecessor = previous;
        previous = task.id;
        user.workload.push_back(task);
      }
      users.push_back(std::move(user));
    }
  }

  Topology topology(std::move(zones), std::move(links), std::move(server_zones), ts.wireless_latency_ms,
                    ts.bandwidth_mbps, ts.provisioning_setup_s);
  return Scenario(std::move(users), std::move(servers), std::move(topology), spec.criticality, spec.seed);
}

// ---------------------------------------------------------------------------

std::vector<std::string> preset_names() { return {"paper", "desk", "tiny"}; }

ScenarioSpec preset(std::string_view name, std::int64_t seed) {
  const ServiceCatalog& catalog = ServiceCatalog::builtin();
  ScenarioSpec spec;
  spec.seed = seed;
  if (name == "paper") {
    spec.users_per_service = {44, 6, 1, 1};
    spec.zone_count = 22;
    spec.servers = {catalog.server_model("jetson-tx2"), catalog.server_model("jetson-tx2"),
                    catalog.server_model("xeon-e5430"), catalog.server_model("xeon-e5645")};
    return spec;
  }
  if (name == "desk") {
    spec.users_per_service = {6, 2, 1, 1};
    spec.zone_count = 4;
    spec.spread_users = true;
    spec.servers = {catalog.server_model("raspberry-pi-4"), catalog.server_model("jetson-tx2"),
                    catalog.server_model("xeon-e5430"), catalog.server_model("xeon-e5645")};
    spec.topology.link_bandwidth_choices = {25.0, 100.0};
    return spec;
  }
  if (name == "tiny") {
    spec.users_per_service = {1, 1, 0, 0};
    spec.zone_count = 2;
    spec.servers = {catalog.server_model("jetson-nano"), catalog.server_model("xeon-e5645")};
    return spec;
  }
  raise(ErrorCode::NotFound, "preset '" + std::string(name) + "'");
}

} // namespace edgesched
