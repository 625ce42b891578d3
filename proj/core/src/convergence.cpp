#include "edgesched/convergence.hpp"

#include "edgesched/errors.hpp"

namespace edgesched {

std::optional<std::size_t> detect_convergence(std::span<const double> series, double threshold,
                                              std::size_t window) {
  if (!(threshold > 0.0 && threshold <= 1.0)) raise(ErrorCode::InvalidConfig, "threshold must lie in (0, 1]");
  if (window == 0) raise(ErrorCode::InvalidConfig, "window must be >= 1");
  std::size_t start = series.size();
  while (start > 0 && series[start - 1] > threshold) --start;
  if (series.size() - start < window) return std::nullopt;
  return start;
}

} // namespace edgesched
