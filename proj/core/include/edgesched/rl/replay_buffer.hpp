#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "edgesched/random.hpp"

namespace edgesched::rl {

struct Transition {
  std::vector<double> state;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
  /// Actions allowed in next_state (1 = legal). Empty means all are legal.
  std::vector<std::uint8_t> next_legal;
};

/// Fixed-capacity ring of transitions; the oldest entry is overwritten first.
class ReplayBuffer {
public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition transition);

  [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
  [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
  [[nodiscard]] bool empty() const noexcept { return items_.empty(); }

  /// i-th stored transition counted from the oldest.
  [[nodiscard]] const Transition& at(std::size_t i) const;

  /// `batch` distinct transitions chosen uniformly (fewer if the buffer is smaller).
  [[nodiscard]] std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const;

private:
  std::size_t capacity_;
  std::size_t head_ = 0; // next slot to overwrite once full
  std::vector<Transition> items_;
};

} // namespace edgesched::rl
