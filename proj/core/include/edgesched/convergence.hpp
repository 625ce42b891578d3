#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace edgesched {

/// Smallest episode e such that every value from e onward exceeds `threshold`
/// and at least `window` values follow from e (inclusive). Absent otherwise.
/// With this reading a run converges once its hit-ratio exceeds the threshold
/// for `window` consecutive episodes and never falls back.
std::optional<std::size_t> detect_convergence(std::span<const double> series, double threshold,
                                              std::size_t window);

} // namespace edgesched
