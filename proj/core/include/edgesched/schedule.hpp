#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace edgesched {

/// |T| x |S| binary record of assignment decisions. Rows are tasks (in
/// Scenario::tasks() order), columns are servers.
class DecisionMatrix {
public:
  DecisionMatrix() = default;
  DecisionMatrix(std::size_t tasks, std::size_t servers)
      : tasks_(tasks), servers_(servers), cells_(tasks * servers, 0) {}

  [[nodiscard]] std::size_t rows() const noexcept { return tasks_; }
  [[nodiscard]] std::size_t cols() const noexcept { return servers_; }

  [[nodiscard]] bool at(std::size_t task, std::size_t server) const noexcept {
    return cells_[task * servers_ + server] != 0;
  }
  void set(std::size_t task, std::size_t server) noexcept { cells_[task * servers_ + server] = 1; }

  [[nodiscard]] int row_sum(std::size_t task) const noexcept;
  [[nodiscard]] int total() const noexcept;

  friend bool operator==(const DecisionMatrix&, const DecisionMatrix&) = default;

private:
  std::size_t tasks_ = 0;
  std::size_t servers_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct Assignment {
  std::size_t task = 0;
  std::size_t server = 0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Ordered list of (task, server) placements with its decision matrix.
/// A task can be placed at most once.
class Schedule {
public:
  Schedule() = default;
  Schedule(std::size_t tasks, std::size_t servers);

  /// Throws Error{InvalidSpec} if the task is already placed or an index is out of range.
  void assign(std::size_t task, std::size_t server);

  [[nodiscard]] std::optional<std::size_t> server_of(std::size_t task) const noexcept {
    const auto s = placement_[task];
    return s < 0 ? std::nullopt : std::optional<std::size_t>(static_cast<std::size_t>(s));
  }
  [[nodiscard]] bool is_assigned(std::size_t task) const noexcept { return placement_[task] >= 0; }

  [[nodiscard]] std::span<const Assignment> assignments() const noexcept { return assignments_; }
  [[nodiscard]] const DecisionMatrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] std::size_t num_tasks() const noexcept { return matrix_.rows(); }
  [[nodiscard]] std::size_t num_servers() const noexcept { return matrix_.cols(); }

  friend bool operator==(const Schedule& lhs, const Schedule& rhs) noexcept {
    return lhs.assignments_ == rhs.assignments_ && lhs.matrix_ == rhs.matrix_;
  }

private:
  std::vector<Assignment> assignments_;
  DecisionMatrix matrix_;
  std::vector<std::int32_t> placement_;
};

} // namespace edgesched
