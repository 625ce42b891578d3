#include "edgesched/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "edgesched/errors.hpp"
#include "edgesched/network.hpp"

namespace edgesched {

int DecisionMatrix::row_sum(std::size_t task) const noexcept {
  int sum = 0;
  for (std::size_t k = 0; k < servers_; ++k) sum += cells_[task * servers_ + k];
  return sum;
}

int DecisionMatrix::total() const noexcept {
  return std::accumulate(cells_.begin(), cells_.end(), 0);
}

Schedule::Schedule(std::size_t tasks, std::size_t servers)
    : matrix_(tasks, servers), placement_(tasks, -1) {}

void Schedule::assign(std::size_t task, std::size_t server) {
  if (task >= num_tasks() || server >= num_servers())
    raise(ErrorCode::InvalidSpec, "assignment index out of range");
  if (placement_[task] >= 0)
    raise(ErrorCode::InvalidSpec, "task index " + std::to_string(task) + " is already placed");
  placement_[task] = static_cast<std::int32_t>(server);
  matrix_.set(task, server);
  assignments_.push_back({task, server});
}

// ---------------------------------------------------------------------------

double execution_time(const Task& task, const EdgeServer& server) noexcept {
  return (task.cpu_cycles_per_mb * task.ram_mb) / (server.cpu_freq_hz * static_cast<double>(server.cores));
}

double task_cpu_utilization(const Task& task, const EdgeServer& server) noexcept {
  return execution_time(task, server) / task.deadline_s;
}

Utilization task_demand(const Task& task, const EdgeServer& server) noexcept {
  return {task_cpu_utilization(task, server), task.ram_mb / server.ram_mb,
          task.storage_mb / server.storage_mb};
}

ResponseBreakdown response_breakdown(const Scenario& scenario, std::size_t task, std::size_t server,
                                     const Schedule& schedule) {
  const Task& t = scenario.tasks()[task];
  const EdgeServer& s = scenario.servers()[server];
  const EdgeUser& user = scenario.owner(task);
  ResponseBreakdown r;
  r.execution = execution_time(t, s);
  r.provisioning = provisioning_time(t, user, s, scenario.topology());
  r.rtt_user_server = rtt_user_server(user, s, scenario.topology());
  r.rtt_inter_task = rtt_inter_task(scenario, task, server, schedule);
  return r;
}

double response_time(const Scenario& scenario, std::size_t task, std::size_t server,
                     const Schedule& schedule) {
  return response_breakdown(scenario, task, server, schedule).total();
}

ServerLoad server_load(const Schedule& schedule, std::size_t server, const Scenario& scenario) {
  ServerLoad load;
  const EdgeServer& s = scenario.servers()[server];
  load.server_id = s.id;
  for (const Assignment& a : schedule.assignments()) {
    if (a.server != server) continue;
    const Task& t = scenario.tasks()[a.task];
    load.util += task_demand(t, s);
    load.assigned.push_back(t.id);
  }
  return load;
}

std::vector<ServerLoad> server_loads(const Schedule& schedule, const Scenario& scenario) {
  std::vector<ServerLoad> loads;
  loads.reserve(scenario.num_servers());
  for (std::size_t k = 0; k < scenario.num_servers(); ++k) loads.push_back(server_load(schedule, k, scenario));
  return loads;
}

FeasibilityReport check_assignment(const Scenario& scenario, std::size_t task, std::size_t server,
                                   const Schedule& schedule, const Utilization& load,
                                   double utilization_threshold) {
  const Task& t = scenario.tasks()[task];
  const EdgeServer& s = scenario.servers()[server];
  const Utilization demand = task_demand(t, s);

  FeasibilityReport report;
  report.single_assignment_ok = !schedule.is_assigned(task);
  report.capacity_ok = (load.cpu + demand.cpu) < 1.0 && (load.ram + demand.ram) < 1.0 &&
                       (load.storage + demand.storage) < 1.0;
  report.availability_ok = load.cpu < utilization_threshold && load.ram < utilization_threshold &&
                           load.storage < utilization_threshold;
  report.response_time_s = response_time(scenario, task, server, schedule);
  report.deadline_ok = report.response_time_s <= t.deadline_s;
  return report;
}

FeasibilityReport check_assignment(const Scenario& scenario, TaskId task, ServerId server,
                                   const Schedule& schedule, double utilization_threshold) {
  if (!(utilization_threshold > 0.0 && utilization_threshold <= 1.0))
    raise(ErrorCode::InvalidConfig, "utilization threshold must lie in (0, 1]");
  const std::size_t j = scenario.task_index(task);
  const std::size_t k = scenario.server_index(server);
  return check_assignment(scenario, j, k, schedule, server_load(schedule, k, scenario).util,
                          utilization_threshold);
}

bool task_hits(const Scenario& scenario, std::size_t task, const Schedule& schedule) {
  const auto server = schedule.server_of(task);
  if (!server) return false;
  return response_time(scenario, task, *server, schedule) <= scenario.tasks()[task].deadline_s;
}

std::size_t hit_task_count(const Scenario& scenario, const Schedule& schedule) {
  std::size_t hits = 0;
  for (std::size_t j = 0; j < scenario.num_tasks(); ++j) hits += task_hits(scenario, j, schedule) ? 1 : 0;
  return hits;
}

double hit_ratio(const Schedule& schedule, const Scenario& scenario) {
  std::vector<char> user_ok(scenario.users().size(), 1);
  for (std::size_t j = 0; j < scenario.num_tasks(); ++j) {
    const std::size_t u = scenario.owner_index(j);
    if (user_ok[u] && !task_hits(scenario, j, schedule)) user_ok[u] = 0;
  }
  const auto hits = static_cast<double>(std::count(user_ok.begin(), user_ok.end(), 1));
  return hits / static_cast<double>(scenario.users().size());
}

bool server_set_feasible(const Scenario& scenario, std::size_t server,
                         const std::vector<std::size_t>& tasks, double utilization_threshold) {
  if (tasks.empty()) return true;
  const EdgeServer& s = scenario.servers()[server];
  std::vector<Utilization> demand;
  demand.reserve(tasks.size());
  Utilization total;
  for (std::size_t j : tasks) {
    demand.push_back(task_demand(scenario.tasks()[j], s));
    total += demand.back();
  }
  if (!(total.cpu < 1.0 && total.ram < 1.0 && total.storage < 1.0)) return false;
  for (std::size_t last = 0; last < tasks.size(); ++last) {
    Utilization before;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (i != last) before += demand[i];
    if (before.cpu < utilization_threshold && before.ram < utilization_threshold &&
        before.storage < utilization_threshold)
      return true;
  }
  return false;
}

std::vector<std::size_t> deadline_order(const Scenario& scenario) {
  std::vector<std::size_t> order(scenario.num_tasks());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& tasks = scenario.tasks();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Task& x = tasks[a];
    const Task& y = tasks[b];
    if (x.deadline_s != y.deadline_s) return x.deadline_s < y.deadline_s;
    if (x.criticality_rank != y.criticality_rank) return x.criticality_rank < y.criticality_rank;
    return x.id < y.id;
  });
  return order;
}

OptimumResult brute_force_optimum(const Scenario& scenario, double utilization_threshold,
                                  std::uint64_t limit) {
  const std::size_t n = scenario.num_tasks();
  const std::size_t servers = scenario.num_servers();
  const std::uint64_t options = servers + 1;

  std::uint64_t space = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (space > limit / options) raise(ErrorCode::TooLarge, "assignment space exceeds enumeration limit");
    space *= options;
  }

  const std::vector<std::size_t> order = deadline_order(scenario);
  const auto build = [&](const std::vector<std::size_t>& choice) {
    Schedule schedule(n, servers);
    for (std::size_t j : order)
      if (choice[j] != 0) schedule.assign(j, choice[j] - 1);
    return schedule;
  };

  std::vector<std::size_t> choice(n, 0);
  std::vector<std::vector<std::size_t>> per_server(servers);
  OptimumResult best{build(choice), -1.0, 0};

  for (std::uint64_t iter = 0; iter < space; ++iter) {
    for (auto& v : per_server) v.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (choice[j] != 0) per_server[choice[j] - 1].push_back(j);

    bool feasible = true;
    for (std::size_t k = 0; k < servers && feasible; ++k)
      feasible = server_set_feasible(scenario, k, per_server[k], utilization_threshold);

    if (feasible) {
      ++best.evaluated;
      Schedule schedule = build(choice);
      const double ratio = hit_ratio(schedule, scenario);
      if (ratio > best.hit_ratio) {
        best.hit_ratio = ratio;
        best.schedule = std::move(schedule);
      }
    }

    // Odometer with the last task as the fastest digit: lexicographic order.
    for (std::size_t pos = n; pos-- > 0;) {
      if (++choice[pos] < options) break;
      choice[pos] = 0;
    }
  }
  return best;
}

double provisioning_total(const Scenario& scenario, const Schedule& schedule) {
  double total = 0.0;
  for (const Assignment& a : schedule.assignments()) {
    total += provisioning_time(scenario.tasks()[a.task], scenario.owner(a.task),
                               scenario.servers()[a.server], scenario.topology());
  }
  return total;
}

} // namespace edgesched
