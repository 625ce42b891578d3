#include "edgesched/arl/agent.hpp"

#include <chrono>

#include "edgesched/convergence.hpp"
#include "edgesched/errors.hpp"

namespace edgesched::arl {

std::string_view to_string(Variant variant) noexcept {
  return variant == Variant::Agile ? "arl" : "vrl";
}

void AgentConfig::validate() const {
  dqn.validate();
  reward.validate();
  if (!(utilization_threshold > 0.0 && utilization_threshold <= 1.0))
    raise(ErrorCode::InvalidConfig, "utilization threshold must lie in (0, 1]");
  if (vanilla_step_cap_factor == 0) raise(ErrorCode::InvalidConfig, "vanilla step cap factor must be >= 1");
}

void ConvergenceConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) raise(ErrorCode::InvalidConfig, "threshold must lie in (0, 1]");
  if (window == 0) raise(ErrorCode::InvalidConfig, "window must be >= 1");
  if (max_episodes < window) raise(ErrorCode::InvalidConfig, "episode budget is smaller than the convergence window");
}

Agent::Agent(const Scenario& scenario, AgentConfig config)
    : scenario_(&scenario),
      config_(std::move(config)),
      rng_(config_.dqn.seed),
      replay_(config_.dqn.replay_capacity) {
  config_.validate();
  policy_ = rl::QNetwork(state_dim(scenario), config_.dqn.hidden_dims,
                         scenario.num_tasks() * scenario.num_servers(), rng_);
  target_ = policy_;
}

double Agent::current_epsilon() const noexcept {
  return forced_epsilon_ ? *forced_epsilon_ : rl::epsilon_threshold(total_steps_, config_.dqn);
}

std::size_t Agent::step_cap() const noexcept {
  const std::size_t n = scenario_->num_tasks();
  return config_.variant == Variant::Agile ? n : config_.vanilla_step_cap_factor * n;
}

Action Agent::greedy_action(const EpisodeState& state) const {
  const std::size_t servers = scenario_->num_servers();
  const std::vector<double> q = policy_.forward(encode_state(state, *scenario_));
  if (config_.variant == Variant::Agile) {
    const std::vector<std::uint8_t> mask = legal_mask(state, servers);
    return Action::from_flat(rl::masked_argmax(q, mask), servers);
  }
  return Action::from_flat(rl::masked_argmax(q, {}), servers);
}

Action Agent::select_action(const EpisodeState& state, StepMode* mode) {
  const double epsilon = current_epsilon();
  const double sample = rng_.uniform01();
  if (sample > epsilon) {
    if (mode) *mode = StepMode::Exploit;
    return greedy_action(state);
  }
  if (mode) *mode = StepMode::Explore;
  const std::size_t servers = scenario_->num_servers();
  if (config_.variant == Variant::Agile)
    return informed_explore(state, *scenario_, config_.utilization_threshold, rng_);
  return Action::from_flat(rng_.below(scenario_->num_tasks() * servers), servers);
}

std::optional<double> Agent::observe(rl::Transition transition) {
  replay_.push(std::move(transition));
  ++total_steps_;
  std::optional<double> loss;
  if (replay_.size() >= config_.dqn.batch_size) {
    const auto batch = replay_.sample(config_.dqn.batch_size, rng_);
    loss = rl::td_train_step(policy_, target_, batch, config_.dqn);
    ++train_steps_;
  }
  if (total_steps_ % config_.dqn.target_update_interval == 0) rl::sync_target(policy_, target_);
  return loss;
}

namespace {

bool episode_done(const EpisodeState& state, std::size_t num_tasks, std::size_t cap) {
  return state.unassigned().empty() || state.hit_tasks() == num_tasks || state.steps() >= cap;
}

EpisodeRecord finish(const EpisodeState& state, std::size_t cap) {
  EpisodeRecord rec;
  rec.schedule = state.schedule();
  rec.decisions = state.decisions();
  rec.total_reward = state.total_reward();
  rec.hit_tasks = state.hit_tasks();
  rec.steps = state.steps();
  rec.truncated = state.steps() >= cap && !state.unassigned().empty();
  return rec;
}

} // namespace

EpisodeRecord run_episode(Agent& agent, const StepObserver& observer, std::size_t episode_index) {
  const Scenario& scenario = agent.scenario();
  const AgentConfig& cfg = agent.config();
  const std::size_t n = scenario.num_tasks();
  const std::size_t servers = scenario.num_servers();
  const std::size_t cap = agent.step_cap();
  const bool masked = cfg.variant == Variant::Agile;

  EpisodeState state(scenario);
  double loss_sum = 0.0;
  std::size_t updates = 0;

  while (!episode_done(state, n, cap)) {
    StepTrace trace;
    trace.episode = episode_index;
    trace.epsilon = agent.current_epsilon();
    trace.legal_before = state.unassigned().size() * servers;

    rl::Transition tr;
    tr.state = encode_state(state, scenario);
    const Action action = agent.select_action(state, &trace.mode);
    const RewardOutcome outcome = compute_reward(action, state, scenario, cfg.utilization_threshold, cfg.reward);
    state.apply(action, outcome, scenario);

    tr.action = action.flat;
    tr.reward = outcome.reward;
    tr.next_state = encode_state(state, scenario);
    tr.terminal = episode_done(state, n, cap);
    if (masked && !tr.terminal) tr.next_legal = legal_mask(state, servers);

    if (const auto loss = agent.observe(std::move(tr))) {
      loss_sum += *loss;
      ++updates;
    }

    trace.step = state.steps();
    trace.action = action;
    trace.outcome = outcome;
    trace.legal_after = state.unassigned().size() * servers;
    if (observer) observer(trace, state);
  }

  EpisodeRecord rec = finish(state, cap);
  rec.train_updates = updates;
  rec.mean_loss = updates > 0 ? loss_sum / static_cast<double>(updates) : 0.0;
  return rec;
}

EpisodeRecord run_greedy_episode(const Agent& agent) {
  const Scenario& scenario = agent.scenario();
  const AgentConfig& cfg = agent.config();
  const std::size_t n = scenario.num_tasks();
  const std::size_t cap = agent.step_cap();

  EpisodeState state(scenario);
  while (!episode_done(state, n, cap)) {
    const Action action = agent.greedy_action(state);
    const RewardOutcome outcome = compute_reward(action, state, scenario, cfg.utilization_threshold, cfg.reward);
    state.apply(action, outcome, scenario);
    // A repeated pick of a decided task leaves the state unchanged, so the
    // deterministic policy would repeat it until the cap.
    if (!outcome.task_unassigned) {
      EpisodeRecord rec = finish(state, cap);
      rec.steps = cap;
      rec.truncated = true;
      return rec;
    }
  }
  return finish(state, cap);
}

TrainResult train(const Scenario& scenario, const AgentConfig& config, const ConvergenceConfig& convergence,
                  std::int64_t seed, const StepObserver& observer) {
  convergence.validate();
  AgentConfig cfg = config;
  cfg.dqn.seed = seed;
  const auto started = std::chrono::steady_clock::now();

  Agent agent(scenario, cfg);
  TrainResult result;
  result.variant = cfg.variant;
  result.seed = seed;
  result.best_schedule = Schedule(scenario.num_tasks(), scenario.num_servers());
  result.best_hit_ratio = hit_ratio(result.best_schedule, scenario);
  result.parameter_count = agent.policy().parameter_count();

  std::vector<double> series;
  for (std::size_t e = 0; e < convergence.max_episodes; ++e) {
    const EpisodeRecord rec = run_episode(agent, observer, e);
    const EpisodeRecord greedy = run_greedy_episode(agent);

    EpisodeMetrics m;
    m.episode = e;
    m.train_hit_ratio = hit_ratio(rec.schedule, scenario);
    m.hit_ratio = hit_ratio(greedy.schedule, scenario);
    m.total_reward = rec.total_reward;
    m.steps = rec.steps;
    m.hit_tasks = rec.hit_tasks;
    m.mean_loss = rec.mean_loss;
    m.truncated = rec.truncated;
    result.truncated_episodes += rec.truncated ? 1 : 0;

    if (m.train_hit_ratio > result.best_hit_ratio) {
      result.best_hit_ratio = m.train_hit_ratio;
      result.best_schedule = rec.schedule;
    }
    if (m.hit_ratio > result.best_hit_ratio) {
      result.best_hit_ratio = m.hit_ratio;
      result.best_schedule = greedy.schedule;
    }
    result.final_greedy_hit_ratio = m.hit_ratio;
    result.episodes.push_back(m);
    series.push_back(m.hit_ratio);

    if (series.size() >= convergence.window) {
      if (const auto start = detect_convergence(series, convergence.threshold, convergence.window)) {
        result.convergence_episode = *start;
        break;
      }
    }
  }

  result.total_steps = agent.total_steps();
  result.train_updates = agent.train_steps();
  result.policy = agent.policy();
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

TrainResult train_vanilla(const Scenario& scenario, AgentConfig config, const ConvergenceConfig& convergence,
                          std::int64_t seed, const StepObserver& observer) {
  config.variant = Variant::Vanilla;
  return train(scenario, config, convergence, seed, observer);
}

} // namespace edgesched::arl
