#include "edgesched/process_stats.hpp"

#include <ctime>
#include <fstream>

#include <unistd.h>

namespace edgesched {

std::uint64_t current_rss_bytes() noexcept {
  std::ifstream statm("/proc/self/statm");
  std::uint64_t size = 0;
  std::uint64_t resident = 0;
  if (!(statm >> size >> resident)) return 0;
  const long page = sysconf(_SC_PAGESIZE);
  return resident * static_cast<std::uint64_t>(page > 0 ? page : 4096);
}

double thread_cpu_seconds() noexcept {
  timespec ts{};
  if (clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts) != 0) return 0.0;
  return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

PeakRssSampler::PeakRssSampler(std::chrono::milliseconds period) : period_(period) {}

PeakRssSampler::~PeakRssSampler() { stop(); }

void PeakRssSampler::observe() noexcept {
  const std::uint64_t now = current_rss_bytes();
  std::uint64_t prev = peak_.load();
  while (now > prev && !peak_.compare_exchange_weak(prev, now)) {
  }
}

void PeakRssSampler::start() {
  stop();
  baseline_ = current_rss_bytes();
  peak_ = baseline_;
  {
    std::lock_guard lock(mutex_);
    running_ = true;
  }
  worker_ = std::thread([this] {
    std::unique_lock lock(mutex_);
    while (running_) {
      observe();
      wake_.wait_for(lock, period_, [this] { return !running_; });
    }
  });
}

std::uint64_t PeakRssSampler::stop() {
  observe();
  {
    std::lock_guard lock(mutex_);
    running_ = false;
  }
  wake_.notify_all();
  if (worker_.joinable()) worker_.join();
  return peak_;
}

} // namespace edgesched
