#include "edgesched/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "edgesched/baselines.hpp"
#include "edgesched/errors.hpp"
#include "edgesched/evaluation.hpp"
#include "edgesched/process_stats.hpp"

namespace edgesched::harness {

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
  case Algorithm::Arl: return "arl";
  case Algorithm::Vrl: return "vrl";
  case Algorithm::Edf: return "edf";
  case Algorithm::BestFit: return "bestfit";
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view tag) {
  for (Algorithm a : kAllAlgorithms)
    if (to_string(a) == tag) return a;
  raise(ErrorCode::NotFound, "unknown algorithm '" + std::string(tag) + "'");
}

void ExperimentConfig::validate() const {
  agent.validate();
  convergence.validate();
  if (!(watts_per_core >= 0.0) || !std::isfinite(watts_per_core))
    raise(ErrorCode::InvalidConfig, "watts per core must be finite and >= 0");
  if (jobs == 0) raise(ErrorCode::InvalidConfig, "jobs must be >= 1");
}

double energy_proxy(double cpu_time_seconds, double watts_per_core) {
  return std::max(0.0, cpu_time_seconds) * watts_per_core;
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) raise(ErrorCode::Empty, "cannot summarize an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  Summary s;
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(n);
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  if (n > 1) {
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

const AlgorithmSummary& AggregateReport::summary(Algorithm algorithm) const {
  for (const AlgorithmSummary& s : summaries)
    if (s.algorithm == algorithm) return s;
  raise(ErrorCode::NotFound, "no summary for " + std::string(to_string(algorithm)));
}

RunMetrics run_once(const Scenario& scenario, Algorithm algorithm, std::int64_t seed, const ExperimentConfig& cfg) {
  RunMetrics m;
  m.algorithm = algorithm;
  m.seed = seed;
  const double uth = cfg.agent.utilization_threshold;

  PeakRssSampler sampler;
  if (cfg.measure_ram) sampler.start();
  const double cpu_start = thread_cpu_seconds();
  const auto wall_start = std::chrono::steady_clock::now();

  if (algorithm == Algorithm::Edf || algorithm == Algorithm::BestFit) {
    m.schedule = algorithm == Algorithm::Edf ? edf_schedule(scenario, uth) : bestfit_schedule(scenario, uth);
    m.hit_ratio_final = hit_ratio(m.schedule, scenario);
    m.provisioning_seconds = provisioning_total(scenario, m.schedule);
  } else {
    arl::AgentConfig agent = cfg.agent;
    agent.variant = algorithm == Algorithm::Arl ? arl::Variant::Agile : arl::Variant::Vanilla;
    const arl::TrainResult r = arl::train(scenario, agent, cfg.convergence, seed);
    m.schedule = r.best_schedule;
    m.hit_ratio_final = r.best_hit_ratio;
    m.convergence_episode = r.convergence_episode;
    m.episodes = r.episodes.size();
    m.total_steps = r.total_steps;
    m.hit_ratio_series.reserve(r.episodes.size());
    for (const arl::EpisodeMetrics& e : r.episodes) m.hit_ratio_series.push_back(e.hit_ratio);
  }

  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  m.cpu_seconds = std::max(0.0, thread_cpu_seconds() - cpu_start);
  if (cfg.measure_ram) {
    m.peak_ram_bytes = sampler.stop();
    m.ram_delta_bytes = m.peak_ram_bytes - std::min(m.peak_ram_bytes, sampler.baseline_bytes());
  }
  m.runtime_seconds = m.wall_seconds + m.provisioning_seconds;
  m.energy_joules_proxy = energy_proxy(m.cpu_seconds, cfg.watts_per_core);
  return m;
}

std::vector<AlgorithmSummary> aggregate(std::span<const RunMetrics> runs) {
  std::vector<AlgorithmSummary> out;
  for (Algorithm a : kAllAlgorithms) {
    std::vector<double> hit, runtime, cpu, ram, energy, steps;
    std::size_t converged = 0;
    for (const RunMetrics& r : runs) {
      if (r.algorithm != a) continue;
      hit.push_back(r.hit_ratio_final);
      runtime.push_back(r.runtime_seconds);
      cpu.push_back(r.cpu_seconds);
      ram.push_back(static_cast<double>(r.peak_ram_bytes));
      energy.push_back(r.energy_joules_proxy);
      steps.push_back(static_cast<double>(r.total_steps));
      converged += r.convergence_episode ? 1 : 0;
    }
    if (hit.empty()) continue;
    AlgorithmSummary s;
    s.algorithm = a;
    s.repetitions = hit.size();
    s.converged = converged;
    s.hit_ratio = summarize(hit);
    s.runtime_seconds = summarize(runtime);
    s.cpu_seconds = summarize(cpu);
    s.peak_ram_bytes = summarize(ram);
    s.energy_joules = summarize(energy);
    s.total_steps = summarize(steps);
    out.push_back(s);
  }
  return out;
}

AggregateReport run_experiment(const Scenario& scenario, std::span<const Algorithm> algorithms,
                               std::size_t repetitions, std::int64_t base_seed, const ExperimentConfig& cfg) {
  if (repetitions == 0) raise(ErrorCode::InvalidConfig, "repetitions must be >= 1");
  if (algorithms.empty()) raise(ErrorCode::InvalidConfig, "no algorithms requested");
  cfg.validate();

  AggregateReport report;
  report.repetitions = repetitions;
  report.base_seed = base_seed;
  report.ram_measured = cfg.measure_ram;

  struct Job {
    Algorithm algorithm;
    std::size_t repetition;
  };
  std::vector<Job> jobs;
  for (Algorithm a : algorithms)
    for (std::size_t r = 0; r < repetitions; ++r) jobs.push_back({a, r});
  report.runs.resize(jobs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const std::int64_t seed = base_seed + static_cast<std::int64_t>(jobs[i].repetition);
        RunMetrics m = run_once(scenario, jobs[i].algorithm, seed, cfg);
        m.repetition = jobs[i].repetition;
        report.runs[i] = std::move(m);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };

  const std::size_t threads = cfg.measure_ram ? 1 : std::min(cfg.jobs, jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  report.summaries = aggregate(report.runs);
  return report;
}

} // namespace edgesched::harness
