#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "edgesched/rl/qnetwork.hpp"
#include "edgesched/rl/replay_buffer.hpp"

namespace edgesched::rl {

struct DqnHyperparams {
  double gamma = 0.9;
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  std::size_t target_update_interval = 500; ///< environment steps between target syncs
  double epsilon_start = 0.9;
  double epsilon_end = 0.05;
  double epsilon_decay = 1000.0; ///< steps per e-fold of the exploration rate
  std::size_t replay_capacity = 10000;
  std::vector<std::size_t> hidden_dims{128, 128};
  double grad_clip_norm = 1.0; ///< global-norm clip; 0 disables
  std::int64_t seed = 0;

  /// Throws Error{InvalidConfig} when a field is out of range.
  void validate() const;

  friend bool operator==(const DqnHyperparams&, const DqnHyperparams&) = default;
};

/// eps_end + (eps_start - eps_end) * exp(-step / eps_decay)
double epsilon_threshold(std::uint64_t step, const DqnHyperparams& hyper) noexcept;

/// One temporal-difference SGD step on `policy`.
///
/// Targets are r + gamma * max_a' Q_target(s', a') (just r for terminal
/// transitions; the max runs over next_legal when it is given). The loss is
/// the mean squared error on the taken actions. Returns the loss before the
/// update.
double td_train_step(QNetwork& policy, const QNetwork& target, std::span<const Transition* const> batch,
                     const DqnHyperparams& hyper);

/// Copy policy parameters into target.
void sync_target(const QNetwork& policy, QNetwork& target);

/// Index of the largest value among entries with mask[i] != 0 (all entries
/// when the mask is empty); lowest index wins ties. Returns values.size()
/// when nothing is eligible.
std::size_t masked_argmax(std::span<const double> values, std::span<const std::uint8_t> mask) noexcept;

} // namespace edgesched::rl
