#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "edgesched/arl/episode.hpp"
#include "edgesched/rl/dqn.hpp"
#include "edgesched/scenario.hpp"

namespace edgesched::arl {

/// Agile: masked exploitation, EDF-informed exploration, |T| action bound.
/// Vanilla: same network and rewards, uniform exploration over all actions,
/// no mask, episodes capped at `vanilla_step_cap_factor * |T|` steps.
enum class Variant { Agile, Vanilla };

std::string_view to_string(Variant variant) noexcept;

struct AgentConfig {
  Variant variant = Variant::Agile;
  rl::DqnHyperparams dqn;
  RewardConfig reward;
  double utilization_threshold = kDefaultUtilizationThreshold;
  std::size_t vanilla_step_cap_factor = 50;

  void validate() const;
};

struct ConvergenceConfig {
  double threshold = 0.98;
  std::size_t window = 100;
  std::size_t max_episodes = 1500;

  void validate() const;
};

enum class StepMode { Exploit, Explore };

struct StepTrace {
  std::size_t episode = 0;
  std::size_t step = 0; ///< 1-based within the episode
  Action action;
  StepMode mode = StepMode::Explore;
  double epsilon = 0.0;
  RewardOutcome outcome;
  std::size_t legal_before = 0;
  std::size_t legal_after = 0;
};

using StepObserver = std::function<void(const StepTrace&, const EpisodeState&)>;

/// DQN agent bound to one scenario. Owns the policy and target networks, the
/// replay buffer and the run's random stream; strictly single-threaded.
class Agent {
public:
  Agent(const Scenario& scenario, AgentConfig config);

  [[nodiscard]] const Scenario& scenario() const noexcept { return *scenario_; }
  [[nodiscard]] const AgentConfig& config() const noexcept { return config_; }
  [[nodiscard]] rl::QNetwork& policy() noexcept { return policy_; }
  [[nodiscard]] const rl::QNetwork& policy() const noexcept { return policy_; }
  [[nodiscard]] const rl::QNetwork& target() const noexcept { return target_; }
  [[nodiscard]] const rl::ReplayBuffer& replay() const noexcept { return replay_; }
  [[nodiscard]] std::uint64_t total_steps() const noexcept { return total_steps_; }
  [[nodiscard]] std::uint64_t train_steps() const noexcept { return train_steps_; }

  /// Pins the exploration rate (tests, ablations); nullopt restores the schedule.
  void force_epsilon(std::optional<double> epsilon) noexcept { forced_epsilon_ = epsilon; }
  [[nodiscard]] double current_epsilon() const noexcept;

  /// Per-episode step limit: |T| for Agile, the safety cap for Vanilla.
  [[nodiscard]] std::size_t step_cap() const noexcept;

  /// Draws u ~ U[0,1); exploits when u > epsilon, explores otherwise.
  Action select_action(const EpisodeState& state, StepMode* mode = nullptr);
  /// Greedy choice from the policy network (masked for Agile). No randomness.
  [[nodiscard]] Action greedy_action(const EpisodeState& state) const;

  /// Stores a transition, trains once a batch is available, syncs the target
  /// network on schedule. Returns the loss when a training step ran.
  std::optional<double> observe(rl::Transition transition);

  Rng& rng() noexcept { return rng_; }

private:
  const Scenario* scenario_;
  AgentConfig config_;
  Rng rng_;
  rl::QNetwork policy_;
  rl::QNetwork target_;
  rl::ReplayBuffer replay_;
  std::uint64_t total_steps_ = 0;
  std::uint64_t train_steps_ = 0;
  std::optional<double> forced_epsilon_;
};

struct EpisodeRecord {
  Schedule schedule;
  DecisionMatrix decisions;
  double total_reward = 0.0;
  std::size_t hit_tasks = 0;
  std::size_t steps = 0;
  bool truncated = false; ///< stopped by the step cap with tasks still unassigned
  double mean_loss = 0.0;
  std::size_t train_updates = 0;
};

/// One training episode (Algorithm loop: select, reward, apply, store, train).
/// Ends once every task is decided, all tasks hit, or the step cap is reached.
EpisodeRecord run_episode(Agent& agent, const StepObserver& observer = {}, std::size_t episode_index = 0);

/// Rollout of the greedy policy without learning or randomness.
EpisodeRecord run_greedy_episode(const Agent& agent);

struct EpisodeMetrics {
  std::size_t episode = 0;
  double hit_ratio = 0.0;       ///< greedy-policy schedule, user level
  double train_hit_ratio = 0.0; ///< the exploring training episode's schedule
  double total_reward = 0.0;
  std::size_t steps = 0;
  std::size_t hit_tasks = 0;
  double mean_loss = 0.0;
  bool truncated = false;

  friend bool operator==(const EpisodeMetrics&, const EpisodeMetrics&) = default;
};

struct TrainResult {
  Variant variant = Variant::Agile;
  std::int64_t seed = 0;
  std::vector<EpisodeMetrics> episodes;
  std::optional<std::size_t> convergence_episode;
  Schedule best_schedule;   ///< highest hit-ratio schedule generated during the run
  double best_hit_ratio = 0.0;
  double final_greedy_hit_ratio = 0.0;
  std::uint64_t total_steps = 0;
  std::uint64_t train_updates = 0;
  std::size_t truncated_episodes = 0;
  std::size_t parameter_count = 0;
  rl::QNetwork policy;

  // Wall clock; excluded from deterministic output.
  double wall_seconds = 0.0;
};

/// Runs training episodes until the greedy hit-ratio stays above the
/// threshold for `window` consecutive episodes or the budget is spent.
/// `seed` overrides config.dqn.seed. Throws Error{InvalidConfig} when the
/// budget is smaller than the window.
TrainResult train(const Scenario& scenario, const AgentConfig& config, const ConvergenceConfig& convergence,
                  std::int64_t seed, const StepObserver& observer = {});

/// train() with config.variant forced to Vanilla.
TrainResult train_vanilla(const Scenario& scenario, AgentConfig config, const ConvergenceConfig& convergence,
                          std::int64_t seed, const StepObserver& observer = {});

} // namespace edgesched::arl
