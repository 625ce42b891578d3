#include "edgesched/arl/episode.hpp"

#include <algorithm>
#include <numeric>

#include "edgesched/baselines.hpp"
#include "edgesched/errors.hpp"

namespace edgesched::arl {

void RewardConfig::validate() const {
  if (!(positive > 0.0)) raise(ErrorCode::InvalidConfig, "positive reward must be > 0");
  if (!(negative < 0.0)) raise(ErrorCode::InvalidConfig, "negative reward must be < 0");
}

EpisodeState::EpisodeState(const Scenario& scenario)
    : decisions_(scenario.num_tasks(), scenario.num_servers()),
      schedule_(scenario.num_tasks(), scenario.num_servers()),
      loads_(scenario.num_servers()),
      unassigned_(scenario.num_tasks()) {
  std::iota(unassigned_.begin(), unassigned_.end(), std::size_t{0});
}

void EpisodeState::apply(const Action& action, const RewardOutcome& outcome, const Scenario& scenario) {
  ++steps_;
  total_reward_ += outcome.reward;
  if (!outcome.task_unassigned) return;
  decisions_.set(action.task, action.server);
  unassigned_.erase(std::lower_bound(unassigned_.begin(), unassigned_.end(), action.task));
  if (outcome.server_ok) {
    schedule_.assign(action.task, action.server);
    loads_[action.server] += task_demand(scenario.tasks()[action.task], scenario.servers()[action.server]);
  }
  if (outcome.hit) ++hit_tasks_;
}

std::vector<std::size_t> unassigned_from_matrix(const DecisionMatrix& decisions) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < decisions.rows(); ++j)
    if (decisions.row_sum(j) == 0) out.push_back(j);
  return out;
}

std::size_t state_dim(const Scenario& scenario) noexcept {
  return 2 * scenario.num_tasks() + 3 * scenario.num_servers();
}

std::vector<double> encode_state(const EpisodeState& state, const Scenario& scenario) {
  const std::size_t n = scenario.num_tasks();
  std::vector<double> v;
  v.reserve(state_dim(scenario));
  for (std::size_t j = 0; j < n; ++j) v.push_back(state.decisions().row_sum(j) > 0 ? 1.0 : 0.0);
  const auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
  for (const Utilization& u : state.loads()) {
    v.push_back(clamp01(u.cpu));
    v.push_back(clamp01(u.ram));
    v.push_back(clamp01(u.storage));
  }
  double max_deadline = 0.0;
  for (const Task& t : scenario.tasks()) max_deadline = std::max(max_deadline, t.deadline_s);
  for (const Task& t : scenario.tasks()) v.push_back(t.deadline_s / max_deadline);
  return v;
}

std::vector<Action> legal_actions(const EpisodeState& state, std::size_t num_servers) {
  std::vector<Action> out;
  out.reserve(state.unassigned().size() * num_servers);
  for (std::size_t j : state.unassigned())
    for (std::size_t k = 0; k < num_servers; ++k) out.push_back(Action::make(j, k, num_servers));
  return out;
}

std::vector<std::uint8_t> legal_mask(const EpisodeState& state, std::size_t num_servers) {
  std::vector<std::uint8_t> mask(state.decisions().rows() * num_servers, 0);
  for (std::size_t j : state.unassigned())
    std::fill_n(mask.begin() + static_cast<std::ptrdiff_t>(j * num_servers), num_servers, std::uint8_t{1});
  return mask;
}

Action informed_explore(const EpisodeState& state, const Scenario& scenario, double utilization_threshold,
                        Rng& rng) {
  const std::size_t task = edf_next_task(scenario, state.unassigned());
  const std::size_t servers = scenario.num_servers();
  std::vector<std::size_t> available;
  for (std::size_t k = 0; k < servers; ++k) {
    const Utilization demand = task_demand(scenario.tasks()[task], scenario.servers()[k]);
    const Utilization& load = state.loads()[k];
    const bool capacity = load.cpu + demand.cpu < 1.0 && load.ram + demand.ram < 1.0 &&
                          load.storage + demand.storage < 1.0;
    const bool avail = load.cpu < utilization_threshold && load.ram < utilization_threshold &&
                       load.storage < utilization_threshold;
    if (capacity && avail) available.push_back(k);
  }
  const std::size_t server = available.empty() ? rng.below(servers) : available[rng.below(available.size())];
  return Action::make(task, server, servers);
}

RewardOutcome compute_reward(const Action& action, const EpisodeState& state, const Scenario& scenario,
                             double utilization_threshold, const RewardConfig& config) {
  RewardOutcome out;
  if (!state.is_unassigned(action.task)) {
    out.reward = config.negative;
    return out;
  }
  out.task_unassigned = true;
  out.reward = config.positive;

  const FeasibilityReport report = check_assignment(scenario, action.task, action.server, state.schedule(),
                                                    state.loads()[action.server], utilization_threshold);
  if (!(report.availability_ok && report.capacity_ok)) {
    out.reward += config.negative;
    return out;
  }
  out.server_ok = true;
  out.reward += config.positive;
  out.reward += config.criticality_bonus * static_cast<double>(5 - scenario.rank_of(action.task));

  if (report.deadline_ok) {
    out.reward += config.positive;
    out.hit = true;
  } else {
    out.reward += config.negative;
  }
  return out;
}

} // namespace edgesched::arl
