#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <thread>

namespace edgesched {

/// Resident set size of this process from /proc/self/statm; 0 when unavailable.
std::uint64_t current_rss_bytes() noexcept;

/// CPU time consumed by the calling thread.
double thread_cpu_seconds() noexcept;

/// Samples the process RSS on a background thread (10 Hz by default) and on
/// start/stop, keeping the maximum. The figure is process-wide, so it only
/// describes one run when nothing else runs concurrently.
class PeakRssSampler {
public:
  explicit PeakRssSampler(std::chrono::milliseconds period = std::chrono::milliseconds(100));
  ~PeakRssSampler();
  PeakRssSampler(const PeakRssSampler&) = delete;
  PeakRssSampler& operator=(const PeakRssSampler&) = delete;

  void start();
  /// Stops sampling and returns the peak observed since start().
  std::uint64_t stop();

  [[nodiscard]] std::uint64_t baseline_bytes() const noexcept { return baseline_; }

private:
  void observe() noexcept;

  std::chrono::milliseconds period_;
  std::mutex mutex_;
  std::condition_variable wake_;
  bool running_ = false;
  std::atomic<std::uint64_t> peak_{0};
  std::uint64_t baseline_ = 0;
  std::thread worker_;
};

} // namespace edgesched
