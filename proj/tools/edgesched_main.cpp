// edgesched command-line tool: generate scenarios, run one scheduler, compare
// all four.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "edgesched/baselines.hpp"
#include "edgesched/errors.hpp"
#include "edgesched/evaluation.hpp"
#include "edgesched/harness.hpp"
#include "edgesched/process_stats.hpp"
#include "edgesched/serialization.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace edgesched;

namespace {

constexpr int kExitError = 1;

// Files are written under a temporary name and renamed only once every file
// of the command is complete; anything staged is removed otherwise.
class OutputSet {
public:
  OutputSet() = default;
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& [tmp, final_path] : files_) fs::remove(tmp, ec);
  }

  fs::path stage(const fs::path& final_path) {
    fs::path tmp = final_path;
    tmp += ".partial";
    files_.emplace_back(tmp, final_path);
    return tmp;
  }

  void commit() {
    for (const auto& [tmp, final_path] : files_) {
      std::error_code ec;
      fs::rename(tmp, final_path, ec);
      if (ec) raise(ErrorCode::IoError, "cannot move " + tmp.string() + " to " + final_path.string());
    }
    committed_ = true;
  }

private:
  std::vector<std::pair<fs::path, fs::path>> files_;
  bool committed_ = false;
};

struct Options {
  std::string config_path;
  std::optional<std::int64_t> seed;
  std::optional<double> uth;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> jobs;
  std::optional<std::int64_t> scenario_seed;
  std::string scenario_path;
  std::string preset;
  std::string alg;
  std::string out_dir = ".";
  std::string debug_log;
  bool no_ram = false;

  // generate
  std::string output;
  std::optional<int> users;
  std::optional<int> servers;
  std::optional<int> zones;
};

// Effective settings after flags > config file > environment > defaults.
struct Effective {
  std::int64_t seed = 0;
  std::size_t reps = 31;
  std::size_t jobs = 1;
  harness::ExperimentConfig experiment;
};

std::optional<std::int64_t> env_seed() {
  const char* raw = std::getenv("EDGESCHED_SEED");
  if (!raw || !*raw) return std::nullopt;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    raise(ErrorCode::InvalidConfig, std::string("EDGESCHED_SEED is not an integer: ") + raw);
  }
}

Effective resolve(const Options& o) {
  json file = json::object();
  if (!o.config_path.empty()) file = read_json(o.config_path);
  if (!file.is_object()) raise(ErrorCode::InvalidConfig, "config file must hold a JSON object");
  for (const auto& [key, value] : file.items()) {
    static const char* known[] = {"seed", "reps", "jobs", "uth", "watts_per_core", "measure_ram", "agent",
                                  "convergence", "scenario_seed"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      raise(ErrorCode::InvalidConfig, "unknown key '" + key + "' in config file");
  }

  Effective e;
  try {
    if (file.contains("agent")) e.experiment.agent = agent_config_from_json(file.at("agent"));
    if (file.contains("convergence")) e.experiment.convergence = convergence_from_json(file.at("convergence"));
    if (file.contains("uth")) e.experiment.agent.utilization_threshold = file.at("uth").get<double>();
    if (file.contains("watts_per_core")) e.experiment.watts_per_core = file.at("watts_per_core").get<double>();
    if (file.contains("measure_ram")) e.experiment.measure_ram = file.at("measure_ram").get<bool>();
    if (file.contains("reps")) e.reps = file.at("reps").get<std::size_t>();
    if (file.contains("jobs")) e.jobs = file.at("jobs").get<std::size_t>();
    if (o.seed) e.seed = *o.seed;
    else if (file.contains("seed")) e.seed = file.at("seed").get<std::int64_t>();
    else if (auto s = env_seed()) e.seed = *s;
  } catch (const json::exception& ex) {
    raise(ErrorCode::InvalidConfig, ex.what());
  }
  if (o.uth) e.experiment.agent.utilization_threshold = *o.uth;
  if (o.reps) e.reps = *o.reps;
  if (o.jobs) e.jobs = *o.jobs;
  if (o.no_ram) e.experiment.measure_ram = false;
  e.experiment.jobs = e.jobs;
  if (e.reps == 0) raise(ErrorCode::InvalidConfig, "--reps must be >= 1");
  e.experiment.validate();
  return e;
}

std::int64_t scenario_seed(const Options& o, const json& file_config) {
  if (o.scenario_seed) return *o.scenario_seed;
  if (file_config.contains("scenario_seed")) return file_config.at("scenario_seed").get<std::int64_t>();
  return 0;
}

Scenario load_or_generate(const Options& o, json& echo) {
  if (!o.scenario_path.empty()) {
    echo["scenario"] = o.scenario_path;
    return load_scenario(o.scenario_path);
  }
  const std::string name = o.preset.empty() ? "desk" : o.preset;
  json file = o.config_path.empty() ? json::object() : read_json(o.config_path);
  const std::int64_t seed = scenario_seed(o, file);
  echo["preset"] = name;
  echo["scenario_seed"] = seed;
  return generate_scenario(preset(name, seed));
}

json effective_json(const Effective& e) {
  return json{{"seed", e.seed},
              {"reps", e.reps},
              {"jobs", e.jobs},
              {"uth", e.experiment.agent.utilization_threshold},
              {"watts_per_core", e.experiment.watts_per_core},
              {"measure_ram", e.experiment.measure_ram},
              {"agent", to_json(e.experiment.agent)},
              {"convergence", to_json(e.experiment.convergence)}};
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) raise(ErrorCode::IoError, "cannot create output directory " + dir);
  return fs::path(dir);
}

void write_text(const std::string& text, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) raise(ErrorCode::IoError, "write failed for " + path.string());
}

int cmd_generate(const Options& o) {
  json file = o.config_path.empty() ? json::object() : read_json(o.config_path);
  std::int64_t seed = 0;
  if (o.seed) seed = *o.seed;
  else if (file.contains("seed")) seed = file.at("seed").get<std::int64_t>();
  else if (auto s = env_seed()) seed = *s;

  ScenarioSpec spec = preset(o.preset.empty() ? "desk" : o.preset, seed);
  if (o.users) {
    if (*o.users < 1) raise(ErrorCode::InvalidSpec, "--users must be >= 1");
    spec.users_per_service = {};
    for (int i = 0; i < *o.users; ++i) ++spec.users_per_service[static_cast<std::size_t>(i % kServiceCount)];
  }
  if (o.servers) {
    if (*o.servers < 1) raise(ErrorCode::InvalidSpec, "--servers must be >= 1");
    const ServiceCatalog& catalog = ServiceCatalog::builtin();
    const std::vector<std::string> models = catalog.server_model_names();
    spec.servers.clear();
    for (int k = 0; k < *o.servers; ++k)
      spec.servers.push_back(catalog.server_model(models[static_cast<std::size_t>(k) % models.size()]));
  }
  if (o.zones) spec.zone_count = *o.zones;

  const Scenario scenario = generate_scenario(spec);
  OutputSet out;
  write_json(scenario_to_json(scenario), out.stage(o.output));
  out.commit();
  std::printf("wrote %s: %zu users, %zu tasks, %zu servers, %zu zones\n", o.output.c_str(), scenario.users().size(),
              scenario.num_tasks(), scenario.num_servers(), scenario.topology().zones().size());
  return 0;
}

json step_json(const arl::StepTrace& t) {
  return json{{"episode", t.episode},
              {"step", t.step},
              {"task", t.action.task},
              {"server", t.action.server},
              {"mode", t.mode == arl::StepMode::Exploit ? "exploit" : "explore"},
              {"epsilon", t.epsilon},
              {"reward", t.outcome.reward},
              {"task_unassigned", t.outcome.task_unassigned},
              {"server_ok", t.outcome.server_ok},
              {"hit", t.outcome.hit},
              {"legal_before", t.legal_before},
              {"legal_after", t.legal_after}};
}

int cmd_run(const Options& o) {
  const Effective e = resolve(o);
  const harness::Algorithm alg = harness::algorithm_from_string(o.alg);
  json echo = effective_json(e);
  echo["command"] = "run";
  echo["alg"] = o.alg;
  const Scenario scenario = load_or_generate(o, echo);
  const fs::path dir = ensure_dir(o.out_dir);
  const std::string stem = "run-" + o.alg + "-seed" + std::to_string(e.seed);

  OutputSet out;
  std::ofstream debug;
  if (!o.debug_log.empty()) {
    debug.open(out.stage(o.debug_log), std::ios::binary | std::ios::trunc);
    if (!debug) raise(ErrorCode::IoError, "cannot write " + o.debug_log);
  }

  json result;
  harness::RunMetrics m;
  m.algorithm = alg;
  m.seed = e.seed;
  PeakRssSampler sampler;
  if (e.experiment.measure_ram) sampler.start();
  const double cpu0 = thread_cpu_seconds();
  const auto t0 = std::chrono::steady_clock::now();

  if (alg == harness::Algorithm::Arl || alg == harness::Algorithm::Vrl) {
    arl::AgentConfig agent = e.experiment.agent;
    agent.variant = alg == harness::Algorithm::Arl ? arl::Variant::Agile : arl::Variant::Vanilla;
    arl::StepObserver observer;
    if (debug.is_open()) observer = [&](const arl::StepTrace& t, const arl::EpisodeState&) { debug << step_json(t).dump() << '\n'; };
    const arl::TrainResult r = arl::train(scenario, agent, e.experiment.convergence, e.seed, observer);
    result = train_result_to_json(r, scenario);
    m.hit_ratio_final = r.best_hit_ratio;
    m.convergence_episode = r.convergence_episode;
    m.total_steps = r.total_steps;
    write_json(qnetwork_to_json(r.policy), out.stage(dir / (stem + ".policy.json")));
  } else {
    const double uth = e.experiment.agent.utilization_threshold;
    const Schedule s = alg == harness::Algorithm::Edf ? edf_schedule(scenario, uth) : bestfit_schedule(scenario, uth);
    result = json{{"algorithm", o.alg}, {"schedule", schedule_to_json(s, scenario)}};
    m.hit_ratio_final = hit_ratio(s, scenario);
    m.provisioning_seconds = provisioning_total(scenario, s);
    if (debug.is_open()) {
      std::size_t step = 0;
      for (const Assignment& a : s.assignments())
        debug << json{{"step", ++step}, {"task", a.task}, {"server", a.server}, {"hit", task_hits(scenario, a.task, s)}}.dump()
              << '\n';
    }
  }

  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.cpu_seconds = thread_cpu_seconds() - cpu0;
  if (e.experiment.measure_ram) m.peak_ram_bytes = sampler.stop();
  m.runtime_seconds = m.wall_seconds + m.provisioning_seconds;
  m.energy_joules_proxy = harness::energy_proxy(m.cpu_seconds, e.experiment.watts_per_core);

  write_json(json{{"config", echo}, {"result", result}}, out.stage(dir / (stem + ".json")));
  write_json(json{{"config", echo},
                  {"runtime_s", m.runtime_seconds},
                  {"wall_s", m.wall_seconds},
                  {"provisioning_s", m.provisioning_seconds},
                  {"cpu_s", m.cpu_seconds},
                  {"peak_ram_bytes", m.peak_ram_bytes},
                  {"energy_j", m.energy_joules_proxy}},
             out.stage(dir / (stem + ".measured.json")));
  if (debug.is_open()) {
    debug.close();
    if (!debug) raise(ErrorCode::IoError, "write failed for " + o.debug_log);
  }
  out.commit();

  std::printf("alg=%s seed=%lld hit_ratio=%.4f runtime_s=%.3f convergence_episode=%s total_steps=%llu\n",
              o.alg.c_str(), static_cast<long long>(e.seed), m.hit_ratio_final, m.runtime_seconds,
              m.convergence_episode ? std::to_string(*m.convergence_episode).c_str() : "none",
              static_cast<unsigned long long>(m.total_steps));
  return 0;
}

int cmd_compare(const Options& o) {
  const Effective e = resolve(o);
  json echo = effective_json(e);
  echo["command"] = "compare";
  const Scenario scenario = load_or_generate(o, echo);
  const fs::path dir = ensure_dir(o.out_dir);

  const harness::AggregateReport report =
      harness::run_experiment(scenario, harness::kAllAlgorithms, e.reps, e.seed, e.experiment);

  OutputSet out;
  write_text(harness::to_csv(report), out.stage(dir / "compare.csv"));
  write_text(harness::render_scatter_svg(report), out.stage(dir / "compare.svg"));
  json doc = harness::report_to_json(report);
  doc["config"] = echo;
  write_json(doc, out.stage(dir / "compare.json"));
  out.commit();

  std::printf("%-8s %10s %12s %14s %12s %10s\n", "alg", "hit_ratio", "runtime_s", "peak_ram_mib", "energy_j",
              "converged");
  for (const harness::AlgorithmSummary& s : report.summaries) {
    std::printf("%-8s %10.4f %12.3f %14.1f %12.2f %6zu/%zu\n", std::string(harness::to_string(s.algorithm)).c_str(),
                s.hit_ratio.mean, s.runtime_seconds.mean, s.peak_ram_bytes.mean / (1024.0 * 1024.0),
                s.energy_joules.mean, s.converged, s.repetitions);
  }
  std::printf("wrote %s\n", (dir / "compare.csv").string().c_str());
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "JSON config file (flags override it)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Base seed (falls back to EDGESCHED_SEED, then 0)");
}

void add_scenario(CLI::App* cmd, Options& o) {
  auto* scen = cmd->add_option("--scenario", o.scenario_path, "Scenario JSON file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", o.preset, "Generate the scenario from a preset instead")
      ->check(CLI::IsMember(preset_names()))
      ->excludes(scen);
  cmd->add_option("--scenario-seed", o.scenario_seed, "Seed for --preset scenarios (default 0)");
  cmd->add_option("--uth", o.uth, "Utilization threshold in (0, 1]");
  cmd->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task scheduling for soft real-time workloads on edge servers"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Write a scenario JSON file");
  add_common(gen, o);
  gen->add_option("-o,--output", o.output, "Output scenario path")->required();
  gen->add_option("--preset", o.preset, "Base preset (default desk)")->check(CLI::IsMember(preset_names()));
  gen->add_option("--users", o.users, "Total users, dealt round-robin over the four services");
  gen->add_option("--servers", o.servers, "Server count, cycling through the hardware catalog");
  gen->add_option("--zones", o.zones, "Zone count");

  auto* run = app.add_subcommand("run", "Run one scheduler on one scenario");
  add_common(run, o);
  add_scenario(run, o);
  run->add_option("--alg", o.alg, "Algorithm")->required()->check(CLI::IsMember({"arl", "vrl", "edf", "bestfit"}));
  run->add_option("--debug-log", o.debug_log, "Per-step line-delimited JSON log");
  run->add_flag("--no-ram", o.no_ram, "Skip RSS sampling");

  auto* cmp = app.add_subcommand("compare", "Repeated runs of all four schedulers");
  add_common(cmp, o);
  add_scenario(cmp, o);
  cmp->add_option("--reps", o.reps, "Repetitions per algorithm (default 31)");
  cmp->add_option("--jobs", o.jobs, "Parallel runs; ignored while RAM is measured");
  cmp->add_flag("--no-ram", o.no_ram, "Skip RSS sampling so runs may execute in parallel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) return cmd_generate(o);
    if (run->parsed()) return cmd_run(o);
    return cmd_compare(o);
  } catch (const Error& e) {
    std::fprintf(stderr, "edgesched: %s\n", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "edgesched: %s\n", e.what());
    return kExitError;
  }
}
