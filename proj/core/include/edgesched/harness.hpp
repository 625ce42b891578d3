#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgesched/arl/agent.hpp"
#include "edgesched/scenario.hpp"
#include "edgesched/schedule.hpp"

namespace edgesched::harness {

enum class Algorithm { Arl, Vrl, Edf, BestFit };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::Arl, Algorithm::Vrl, Algorithm::Edf, Algorithm::BestFit};

std::string_view to_string(Algorithm algorithm) noexcept;
/// "arl", "vrl", "edf", "bestfit". Throws Error{NotFound} otherwise.
Algorithm algorithm_from_string(std::string_view tag);

inline constexpr double kDefaultWattsPerCore = 15.0;

struct ExperimentConfig {
  arl::AgentConfig agent;
  arl::ConvergenceConfig convergence;
  double watts_per_core = kDefaultWattsPerCore;
  bool measure_ram = true;
  /// Worker threads for repetitions. Forced to 1 while RAM is measured.
  std::size_t jobs = 1;

  void validate() const;
};

/// CPU seconds times a fixed per-core wattage. A proxy, not a measurement.
double energy_proxy(double cpu_time_seconds, double watts_per_core = kDefaultWattsPerCore);

struct RunMetrics {
  Algorithm algorithm = Algorithm::Edf;
  std::size_t repetition = 0;
  std::int64_t seed = 0;
  /// Heuristics: wall time of schedule generation plus simulated provisioning.
  /// RL: wall time of the whole learning phase.
  double runtime_seconds = 0.0;
  double wall_seconds = 0.0;
  double provisioning_seconds = 0.0; ///< simulated, heuristics only
  double cpu_seconds = 0.0;
  double hit_ratio_final = 0.0;
  std::optional<std::size_t> convergence_episode;
  std::size_t episodes = 0;
  std::uint64_t total_steps = 0;
  std::uint64_t peak_ram_bytes = 0;  ///< sampled process RSS peak; 0 when not measured
  std::uint64_t ram_delta_bytes = 0; ///< peak minus the RSS at the start of the run
  double energy_joules_proxy = 0.0;
  std::vector<double> hit_ratio_series;
  Schedule schedule;
};

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0; ///< sample standard deviation; 0 for one value

  friend bool operator==(const Summary&, const Summary&) = default;
};

/// Throws Error{Empty} on an empty input.
Summary summarize(std::span<const double> values);

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::Edf;
  std::size_t repetitions = 0;
  std::size_t converged = 0;
  Summary hit_ratio;
  Summary runtime_seconds;
  Summary cpu_seconds;
  Summary peak_ram_bytes;
  Summary energy_joules;
  Summary total_steps;
};

struct AggregateReport {
  std::size_t repetitions = 0;
  std::int64_t base_seed = 0;
  bool ram_measured = false;
  std::vector<RunMetrics> runs; ///< algorithm-major, then repetition
  std::vector<AlgorithmSummary> summaries;

  [[nodiscard]] const AlgorithmSummary& summary(Algorithm algorithm) const;
};

/// One run of one algorithm. RL algorithms use `seed`; heuristics ignore it.
RunMetrics run_once(const Scenario& scenario, Algorithm algorithm, std::int64_t seed, const ExperimentConfig& cfg);

/// Repetition r of every algorithm uses seed base_seed + r. Throws
/// Error{InvalidConfig} when repetitions is 0.
AggregateReport run_experiment(const Scenario& scenario, std::span<const Algorithm> algorithms,
                               std::size_t repetitions, std::int64_t base_seed, const ExperimentConfig& cfg);

/// Recomputes the per-algorithm summaries from `runs`.
std::vector<AlgorithmSummary> aggregate(std::span<const RunMetrics> runs);

// CSV columns, in order:
//   algorithm, row, seed, hit_ratio, runtime_s, wall_s, provisioning_s, cpu_s,
//   peak_ram_bytes, ram_delta_bytes, energy_j, convergence_episode, episodes, total_steps
// `row` is the repetition index for per-run rows and mean, median or stddev
// for the aggregate rows that follow each algorithm's runs. Empty cells mean
// not applicable.
inline constexpr std::string_view kCsvHeader =
    "algorithm,row,seed,hit_ratio,runtime_s,wall_s,provisioning_s,cpu_s,peak_ram_bytes,ram_delta_bytes,"
    "energy_j,convergence_episode,episodes,total_steps";

std::string to_csv(const AggregateReport& report);
/// Writes `path` and an SVG scatter next to it (same stem, .svg). Throws
/// Error{IoError} when either file cannot be written.
void export_csv(const AggregateReport& report, const std::filesystem::path& path);
/// Three panels: hit-ratio against runtime, peak RAM and energy.
std::string render_scatter_svg(const AggregateReport& report);
nlohmann::json report_to_json(const AggregateReport& report);

} // namespace edgesched::harness
