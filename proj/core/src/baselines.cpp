#include "edgesched/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "edgesched/errors.hpp"

namespace edgesched {

std::size_t edf_next_task(const Scenario& scenario, std::span<const std::size_t> unassigned) {
  if (unassigned.empty()) raise(ErrorCode::Empty, "no unassigned tasks");
  const auto& tasks = scenario.tasks();

  double release = std::numeric_limits<double>::infinity();
  for (std::size_t j : unassigned) release = std::min(release, tasks[j].arrival_s);

  std::size_t best = unassigned.size();
  for (std::size_t i = 0; i < unassigned.size(); ++i) {
    const Task& t = tasks[unassigned[i]];
    if (t.arrival_s > release) continue;
    if (best == unassigned.size()) {
      best = i;
      continue;
    }
    const Task& b = tasks[unassigned[best]];
    if (t.deadline_s != b.deadline_s) {
      if (t.deadline_s < b.deadline_s) best = i;
    } else if (t.criticality_rank != b.criticality_rank) {
      if (t.criticality_rank < b.criticality_rank) best = i;
    } else if (t.id < b.id) {
      best = i;
    }
  }
  return unassigned[best];
}

Schedule edf_schedule(const Scenario& scenario, double utilization_threshold) {
  const std::size_t n = scenario.num_tasks();
  Schedule schedule(n, scenario.num_servers());
  std::vector<Utilization> loads(scenario.num_servers());
  std::vector<std::size_t> pending(n);
  std::iota(pending.begin(), pending.end(), std::size_t{0});

  while (!pending.empty()) {
    const std::size_t task = edf_next_task(scenario, pending);
    pending.erase(std::find(pending.begin(), pending.end(), task));
    for (std::size_t k = 0; k < scenario.num_servers(); ++k) {
      const FeasibilityReport r = check_assignment(scenario, task, k, schedule, loads[k], utilization_threshold);
      if (r.capacity_ok && r.availability_ok) {
        schedule.assign(task, k);
        loads[k] += task_demand(scenario.tasks()[task], scenario.servers()[k]);
        break;
      }
    }
  }
  return schedule;
}

Schedule bestfit_schedule(const Scenario& scenario, double utilization_threshold) {
  const std::size_t n = scenario.num_tasks();
  Schedule schedule(n, scenario.num_servers());
  std::vector<Utilization> loads(scenario.num_servers());

  for (std::size_t task = 0; task < n; ++task) {
    const Task& t = scenario.tasks()[task];
    std::size_t chosen = scenario.num_servers();
    double best_residual = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < scenario.num_servers(); ++k) {
      const FeasibilityReport r = check_assignment(scenario, task, k, schedule, loads[k], utilization_threshold);
      if (!(r.capacity_ok && r.availability_ok)) continue;
      const Utilization after = loads[k] + task_demand(t, scenario.servers()[k]);
      const double residual = std::min({1.0 - after.cpu, 1.0 - after.ram, 1.0 - after.storage});
      if (residual < best_residual) {
        best_residual = residual;
        chosen = k;
      }
    }
    if (chosen == scenario.num_servers()) continue;
    schedule.assign(task, chosen);
    loads[chosen] += task_demand(t, scenario.servers()[chosen]);
  }
  return schedule;
}

} // namespace edgesched
