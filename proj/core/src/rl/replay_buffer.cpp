#include "edgesched/rl/replay_buffer.hpp"

#include "edgesched/errors.hpp"

namespace edgesched::rl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) raise(ErrorCode::InvalidConfig, "replay capacity must be positive");
  items_.reserve(capacity_ < 4096 ? capacity_ : 4096);
}

void ReplayBuffer::push(Transition transition) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(transition));
    return;
  }
  items_[head_] = std::move(transition);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= items_.size()) raise(ErrorCode::NotFound, "replay index out of range");
  return items_[(head_ + i) % items_.size()];
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
  std::vector<const Transition*> out;
  for (std::size_t idx : rng.sample_indices(items_.size(), batch)) out.push_back(&items_[idx]);
  return out;
}

} // namespace edgesched::rl
