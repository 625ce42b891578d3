#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace edgesched {

/// Seeded generator with distribution code that does not depend on the
/// standard library implementation, so runs reproduce across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  explicit Rng(std::int64_t seed) : engine_(static_cast<std::uint64_t>(seed)) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n) noexcept;
  /// k distinct indices from [0, n), uniformly, in draw order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

  std::uint64_t next() noexcept { return engine_(); }

private:
  std::mt19937_64 engine_;
};

} // namespace edgesched
