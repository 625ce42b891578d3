#include "edgesched/rl/dqn.hpp"

#include <cmath>
#include <limits>

#include "edgesched/errors.hpp"

namespace edgesched::rl {

void DqnHyperparams::validate() const {
  const auto fail = [](const char* what) { raise(ErrorCode::InvalidConfig, what); };
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail("gamma must lie in [0, 1]");
  if (!(learning_rate > 0.0)) fail("learning rate must be positive");
  if (batch_size == 0) fail("batch size must be positive");
  if (target_update_interval == 0) fail("target update interval must be positive");
  if (!(0.0 <= epsilon_end && epsilon_end <= epsilon_start && epsilon_start <= 1.0))
    fail("need 0 <= epsilon_end <= epsilon_start <= 1");
  if (!(epsilon_decay > 0.0)) fail("epsilon decay must be positive");
  if (replay_capacity < batch_size) fail("replay capacity must hold at least one batch");
  if (hidden_dims.empty()) fail("at least one hidden layer is required");
  for (std::size_t h : hidden_dims)
    if (h == 0) fail("hidden widths must be positive");
  if (!(grad_clip_norm >= 0.0)) fail("gradient clip norm must be >= 0");
}

double epsilon_threshold(std::uint64_t step, const DqnHyperparams& hyper) noexcept {
  return hyper.epsilon_end + (hyper.epsilon_start - hyper.epsilon_end) *
                                 std::exp(-static_cast<double>(step) / hyper.epsilon_decay);
}

std::size_t masked_argmax(std::span<const double> values, std::span<const std::uint8_t> mask) noexcept {
  std::size_t best = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mask.empty() && mask[i] == 0) continue;
    if (best == values.size() || values[i] > values[best]) best = i;
  }
  return best;
}

double td_train_step(QNetwork& policy, const QNetwork& target, std::span<const Transition* const> batch,
                     const DqnHyperparams& hyper) {
  if (batch.empty()) raise(ErrorCode::InvalidConfig, "empty training batch");
  const auto n = static_cast<double>(batch.size());

  Gradients grads = policy.make_gradients();
  Activations cache;
  std::vector<double> grad_out(policy.output_dim(), 0.0);
  double loss = 0.0;

  for (const Transition* t : batch) {
    double y = t->reward;
    if (!t->terminal) {
      const std::vector<double> next_q = target.forward(t->next_state);
      const std::size_t best = masked_argmax(next_q, t->next_legal);
      if (best < next_q.size()) y += hyper.gamma * next_q[best];
    }
    policy.forward(t->state, cache);
    const double q = cache.post.back()[t->action];
    const double err = q - y;
    loss += err * err / n;
    grad_out[t->action] = 2.0 * err / n;
    policy.backward(cache, grad_out, grads);
    grad_out[t->action] = 0.0;
  }

  if (hyper.grad_clip_norm > 0.0) {
    const double norm = grads.norm();
    if (norm > hyper.grad_clip_norm) grads.scale(hyper.grad_clip_norm / norm);
  }
  policy.apply(grads, hyper.learning_rate);
  return loss;
}

void sync_target(const QNetwork& policy, QNetwork& target) { target = policy; }

} // namespace edgesched::rl
