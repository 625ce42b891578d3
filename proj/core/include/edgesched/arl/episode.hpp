#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "edgesched/evaluation.hpp"
#include "edgesched/random.hpp"
#include "edgesched/scenario.hpp"
#include "edgesched/schedule.hpp"

namespace edgesched::arl {

/// A scheduling action: place task index `task` on server index `server`.
/// `flat` = task * |S| + server is the Q-network output index.
struct Action {
  std::size_t task = 0;
  std::size_t server = 0;
  std::size_t flat = 0;

  static Action make(std::size_t task, std::size_t server, std::size_t num_servers) noexcept {
    return {task, server, task * num_servers + server};
  }
  static Action from_flat(std::size_t flat, std::size_t num_servers) noexcept {
    return {flat / num_servers, flat % num_servers, flat};
  }

  friend bool operator==(const Action&, const Action&) = default;
};

struct RewardConfig {
  double positive = 1.0;
  double negative = -1.0;
  double criticality_bonus = 0.25; ///< paid per rank step above the least critical

  /// Throws Error{InvalidConfig} unless positive > 0 and negative < 0.
  void validate() const;

  friend bool operator==(const RewardConfig&, const RewardConfig&) = default;
};

/// Result of the reward cascade for one action.
struct RewardOutcome {
  double reward = 0.0;
  bool task_unassigned = false; ///< gate 1: single assignment
  bool server_ok = false;       ///< gate 2: availability and capacity
  bool hit = false;             ///< gate 4: response time within the deadline
};

/// Mutable per-episode bookkeeping.
///
/// `decisions()` is the decision matrix G: a row is set once the agent picks
/// that task, whatever the outcome. `schedule()` holds only placements that
/// passed the availability and capacity gate, so the loads it implies always
/// stay below 1.
class EpisodeState {
public:
  explicit EpisodeState(const Scenario& scenario);

  [[nodiscard]] const DecisionMatrix& decisions() const noexcept { return decisions_; }
  [[nodiscard]] const Schedule& schedule() const noexcept { return schedule_; }
  [[nodiscard]] const std::vector<Utilization>& loads() const noexcept { return loads_; }
  /// Unassigned task indices (rows of G that sum to zero), ascending.
  [[nodiscard]] const std::vector<std::size_t>& unassigned() const noexcept { return unassigned_; }
  [[nodiscard]] bool is_unassigned(std::size_t task) const noexcept { return decisions_.row_sum(task) == 0; }
  [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
  [[nodiscard]] std::size_t hit_tasks() const noexcept { return hit_tasks_; }
  [[nodiscard]] double total_reward() const noexcept { return total_reward_; }

  /// Counts the step and, for an unassigned task, marks G and places the task
  /// when the server gate passed.
  void apply(const Action& action, const RewardOutcome& outcome, const Scenario& scenario);

private:
  DecisionMatrix decisions_;
  Schedule schedule_;
  std::vector<Utilization> loads_;
  std::vector<std::size_t> unassigned_;
  std::size_t steps_ = 0;
  std::size_t hit_tasks_ = 0;
  double total_reward_ = 0.0;
};

/// Tasks whose row of G sums to zero, recomputed from scratch.
std::vector<std::size_t> unassigned_from_matrix(const DecisionMatrix& decisions);

/// 2|T| + 3|S| entries in [0, 1]: per-task decided flag, per-server
/// (U_P, U_M, U_L), per-task deadline over the largest deadline.
std::vector<double> encode_state(const EpisodeState& state, const Scenario& scenario);
std::size_t state_dim(const Scenario& scenario) noexcept;

/// Every (unassigned task, server) pair, ordered by flat index.
std::vector<Action> legal_actions(const EpisodeState& state, std::size_t num_servers);
/// Same set as a |T|*|S| mask.
std::vector<std::uint8_t> legal_mask(const EpisodeState& state, std::size_t num_servers);

/// Earliest-deadline unassigned task on a uniformly drawn server among those
/// passing availability and capacity; any server when none passes.
Action informed_explore(const EpisodeState& state, const Scenario& scenario, double utilization_threshold,
                        Rng& rng);

/// Reward cascade: unassigned task (+pos, else stop with neg); server
/// available with capacity (+pos, else +neg and stop); criticality bonus
/// bonus * (5 - rank); deadline met (+pos and hit, else +neg). Pure.
RewardOutcome compute_reward(const Action& action, const EpisodeState& state, const Scenario& scenario,
                             double utilization_threshold, const RewardConfig& config);

} // namespace edgesched::arl
