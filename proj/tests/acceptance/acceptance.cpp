// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "builders.hpp"
#include "edgesched/arl/agent.hpp"
#include "edgesched/baselines.hpp"
#include "edgesched/convergence.hpp"
#include "edgesched/evaluation.hpp"
#include "edgesched/harness.hpp"
#include "edgesched/serialization.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"

using namespace edgesched;
using edgesched::testing::ScenarioBuilder;
using edgesched::testing::TaskDef;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Random scenario from the production generator with at most six tasks and
// three servers. Crowd counting has two tasks, face recognition three and each
// ML service one.
Scenario random_tiny(Rng& rng, std::int64_t seed) {
  static const int kTasks[] = {2, 3, 1, 1};
  const ServiceCatalog& catalog = ServiceCatalog::builtin();
  const std::vector<std::string> models = catalog.server_model_names();
  ScenarioSpec spec;
  spec.seed = seed;
  int tasks = 0;
  while (tasks == 0) {
    spec.users_per_service = {};
    for (int i = 0; i < 6; ++i) {
      const std::size_t svc = rng.below(4);
      if (tasks + kTasks[svc] > 6) continue;
      ++spec.users_per_service[svc];
      tasks += kTasks[svc];
    }
  }
  spec.zone_count = 1 + static_cast<int>(rng.below(3));
  const std::size_t servers = 1 + rng.below(3);
  for (std::size_t k = 0; k < servers; ++k) spec.servers.push_back(catalog.server_model(models[rng.below(models.size())]));
  spec.topology.link_bandwidth_choices = {10.0, 100.0};
  return generate_scenario(spec);
}

arl::AgentConfig compact_agent() {
  arl::AgentConfig cfg;
  cfg.dqn.hidden_dims = {64, 64};
  return cfg;
}

Outcome oracle_optimality() {
  const auto t0 = Clock::now();
  Rng rng(std::uint64_t{2024});
  int matches = 0, oracle_agree = 0;
  std::string misses;
  const arl::ConvergenceConfig conv{0.98, 100, 1500};
  for (int i = 0; i < 20; ++i) {
    const Scenario s = random_tiny(rng, 100 + i);
    const OptimumResult opt = brute_force_optimum(s, kDefaultUtilizationThreshold);
    oracle_agree += opt.hit_ratio == edgesched::testing::oracle_optimum(s, kDefaultUtilizationThreshold) ? 1 : 0;
    const arl::TrainResult r = arl::train(s, compact_agent(), conv, i);
    if (r.best_hit_ratio == opt.hit_ratio) {
      ++matches;
    } else {
      misses += fmt(" #%d(|T|=%zu,|S|=%zu,opt=%.3f,arl=%.3f)", i, s.num_tasks(), s.num_servers(), opt.hit_ratio,
                    r.best_hit_ratio);
    }
  }
  const double secs = seconds_since(t0);
  return {matches >= 18 && oracle_agree == 20 && secs < 300.0,
          fmt("%d/20 equal the brute-force optimum, enumerators agree on %d/20, %.1f s", matches, oracle_agree, secs) +
              misses};
}

Outcome desk_comparison() {
  const auto t0 = Clock::now();
  const Scenario s = generate_scenario(preset("desk", 0));
  harness::ExperimentConfig cfg;
  cfg.agent = compact_agent();
  cfg.measure_ram = false;
  cfg.jobs = 1;
  const std::vector<harness::Algorithm> algs(std::begin(harness::kAllAlgorithms), std::end(harness::kAllAlgorithms));
  const harness::AggregateReport rep = harness::run_experiment(s, algs, 10, 0, cfg);
  const auto& arl = rep.summary(harness::Algorithm::Arl);
  const auto& vrl = rep.summary(harness::Algorithm::Vrl);
  const auto& edf = rep.summary(harness::Algorithm::Edf);
  const auto& bf = rep.summary(harness::Algorithm::BestFit);
  const bool quality = arl.hit_ratio.median >= vrl.hit_ratio.median && arl.hit_ratio.median > edf.hit_ratio.median &&
                       arl.hit_ratio.median > bf.hit_ratio.median;
  const bool speed = arl.runtime_seconds.median < vrl.runtime_seconds.median &&
                     arl.total_steps.median < vrl.total_steps.median;
  const double secs = seconds_since(t0);
  return {quality && speed && secs < 1800.0,
          fmt("median hit ratio arl %.3f vrl %.3f edf %.3f bestfit %.3f; median learning time arl %.1f s vrl %.1f s; "
              "median steps arl %.0f vrl %.0f; converged arl %zu/10 vrl %zu/10; %.1f s",
              arl.hit_ratio.median, vrl.hit_ratio.median, edf.hit_ratio.median, bf.hit_ratio.median,
              arl.runtime_seconds.median, vrl.runtime_seconds.median, arl.total_steps.median,
              vrl.total_steps.median, arl.converged, vrl.converged, secs)};
}

Outcome convergence_examples() {
  const std::vector<double> ones(100, 1.0);
  std::vector<double> peak(200, 0.5);
  peak[120] = 0.99;
  std::vector<double> step(50, 0.5);
  step.resize(200, 0.99);
  const auto a = detect_convergence(ones, 0.98, 100);
  const auto b = detect_convergence(peak, 0.98, 100);
  const auto c = detect_convergence(step, 0.98, 100);
  const bool ok = a == std::optional<std::size_t>(0) && !b && c == std::optional<std::size_t>(50);
  const auto show = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("absent"); };
  return {ok, "constant 1.0 -> " + show(a) + ", single peak -> " + show(b) + ", step at 50 -> " + show(c)};
}

Outcome gradient_check() {
  Rng rng(std::uint64_t{77});
  int checked = 0, skipped = 0;
  double worst = 0.0;
  while (checked < 100) {
    const std::size_t in = 1 + rng.below(12);
    const std::size_t out = 1 + rng.below(8);
    std::vector<std::size_t> hidden(1 + rng.below(2));
    for (std::size_t& h : hidden) h = 1 + rng.below(16);
    rl::QNetwork net(in, hidden, out, rng);
    std::vector<double> x(in), c(out);
    for (double& v : x) v = rng.uniform(-1, 1);
    for (double& v : c) v = rng.uniform(-1, 1);
    const auto r = edgesched::testing::check_gradients(net, x, c);
    if (r.skipped) {
      ++skipped;
      continue;
    }
    ++checked;
    worst = std::max(worst, r.max_rel_error);
  }
  return {worst < 1e-4, fmt("100 pairs checked (%d redrawn near a ReLU kink), worst relative error %.2e", skipped, worst)};
}

Outcome mask_invariants() {
  std::size_t episodes = 0, exploit_steps = 0, violations = 0, long_episodes = 0, legal_mismatch = 0,
              gamma_mismatch = 0;
  std::string first_violation;
  Rng pick(std::uint64_t{5});
  for (int scenario_index = 0; episodes < 1000; ++scenario_index) {
    const Scenario s = scenario_index % 2 == 0 ? generate_scenario(preset("desk", scenario_index))
                                               : random_tiny(pick, 500 + scenario_index);
    arl::AgentConfig cfg;
    cfg.dqn.hidden_dims = {32, 32};
    cfg.dqn.epsilon_decay = 150.0;
    cfg.dqn.seed = scenario_index;
    arl::Agent agent(s, cfg);
    const std::size_t servers = s.num_servers();
    for (int e = 0; e < 100 && episodes < 1000; ++e, ++episodes) {
      std::vector<std::size_t> before(s.num_tasks());
      for (std::size_t j = 0; j < before.size(); ++j) before[j] = j;
      std::size_t legal = arl::legal_actions(arl::EpisodeState(s), servers).size();
      const arl::StepObserver obs = [&](const arl::StepTrace& t, const arl::EpisodeState& st) {
        const bool was_open = std::find(before.begin(), before.end(), t.action.task) != before.end();
        if (t.mode == arl::StepMode::Exploit) {
          ++exploit_steps;
          if (!was_open) {
            ++violations;
            if (first_violation.empty()) first_violation = fmt(" exploit picked decided task %zu", t.action.task);
          }
        }
        const std::size_t now = arl::legal_actions(st, servers).size();
        if (was_open && now != legal - servers) ++legal_mismatch;
        legal = now;
        if (arl::unassigned_from_matrix(st.decisions()) != st.unassigned()) ++gamma_mismatch;
        before = st.unassigned();
      };
      const arl::EpisodeRecord rec = arl::run_episode(agent, obs, static_cast<std::size_t>(e));
      if (rec.steps > s.num_tasks()) ++long_episodes;
    }
  }
  const bool ok = violations == 0 && long_episodes == 0 && legal_mismatch == 0 && gamma_mismatch == 0 &&
                  exploit_steps > 0;
  return {ok, fmt("%zu episodes, %zu exploitation steps; masked-task picks %zu, over-length episodes %zu, "
                  "legal-count mismatches %zu, unassigned-set mismatches %zu",
                  episodes, exploit_steps, violations, long_episodes, legal_mismatch, gamma_mismatch) +
                  first_violation};
}

Outcome math_suite() {
  std::vector<std::string> failed;
  const auto expect = [&](bool cond, const char* what) {
    if (!cond) failed.emplace_back(what);
  };

  Task t;
  EdgeServer srv;
  t.cpu_cycles_per_mb = 4e9;
  t.ram_mb = 2.0;
  srv.cpu_freq_hz = 2e9;
  srv.cores = 2;
  expect(execution_time(t, srv) == 2.0, "execution_time 4e9*2/(2e9*2)");
  t.cpu_cycles_per_mb = 1.0;
  t.ram_mb = 1.0;
  srv.cpu_freq_hz = 1.0;
  srv.cores = 1;
  expect(execution_time(t, srv) == 1.0, "execution_time unit");
  EdgeServer twice = srv;
  twice.cores = 2;
  expect(execution_time(t, twice) == 0.5, "execution_time halves with cores");
  t.cpu_cycles_per_mb = 2.0;
  t.deadline_s = 10.0;
  expect(task_cpu_utilization(t, srv) == 0.2, "task_cpu_utilization 2/10");
  t.deadline_s = 2.0;
  expect(task_cpu_utilization(t, srv) == 1.0, "task_cpu_utilization e=d");

  {
    ScenarioBuilder b(2);
    b.wireless_ms(1.0).link(0, 1, 3.0, 10.0);
    b.server(1, 1.0, 1);
    b.user(0, Service::CrowdCounting, {TaskDef{.cycles_per_mb = 0.2, .ram_mb = 10.0, .deadline_s = 5.0}});
    const Scenario s = b.build();
    expect(response_time(s, 0, 0, Schedule(1, 1)) == 3.008, "response_time 2 + 1 + 0.008");
  }
  {
    ScenarioBuilder b(1);
    b.server(0, 1.0, 1, 10.0, 100.0);
    b.user(0, Service::CrowdCounting, {TaskDef{.cycles_per_mb = 2.0, .ram_mb = 1.0, .deadline_s = 10.0}});
    const Scenario s = b.build();
    Schedule sched(1, 1);
    expect(server_load(sched, 0, s).util == Utilization{}, "server_load empty");
    sched.assign(0, 0);
    expect(server_load(sched, 0, s).util == (Utilization{0.2, 0.1, 0.0}), "server_load one task");
  }
  {
    ScenarioBuilder b(1);
    b.server(0, 1e12, 64, 1e9, 1e9);
    for (int i = 0; i < 52; ++i) b.user(0, Service::CrowdCounting, {TaskDef{.deadline_s = 1.0}});
    const Scenario s = b.build();
    Schedule all(52, 1), half(52, 1);
    for (std::size_t j = 0; j < 52; ++j) all.assign(j, 0);
    for (std::size_t j = 0; j < 26; ++j) half.assign(j, 0);
    expect(hit_ratio(all, s) == 1.0, "hit_ratio all users");
    expect(hit_ratio(half, s) == 0.5, "hit_ratio 26 of 52");
  }

  // Sum of terms, and agreement with the independent formula.
  const Scenario paper = generate_scenario(preset("paper", 3));
  Rng rng(std::uint64_t{31});
  std::size_t sum_checks = 0;
  for (int round = 0; round < 5; ++round) {
    Schedule sched(paper.num_tasks(), paper.num_servers());
    std::vector<int> placement(paper.num_tasks(), -1);
    for (std::size_t j = 0; j < paper.num_tasks(); ++j)
      if (rng.below(2) == 0) {
        sched.assign(j, rng.below(paper.num_servers()));
        placement[j] = static_cast<int>(*sched.server_of(j));
      }
    for (std::size_t j = 0; j < paper.num_tasks(); ++j)
      for (std::size_t k = 0; k < paper.num_servers(); ++k) {
        const ResponseBreakdown r = response_breakdown(paper, j, k, sched);
        const double total = response_time(paper, j, k, sched);
        const double oracle = edgesched::testing::oracle_response(paper, j, k, placement);
        expect(total == r.execution + r.provisioning + r.rtt_user_server + r.rtt_inter_task, "response sum");
        expect(std::abs(total - oracle) <= 1e-12 * std::max(1.0, oracle), "response oracle");
        ++sum_checks;
      }
  }

  std::size_t bounded = 0;
  const Scenario desk = generate_scenario(preset("desk", 1));
  for (int i = 0; i < 10000; ++i) {
    const Scenario& s = i % 2 == 0 ? desk : paper;
    Schedule sched(s.num_tasks(), s.num_servers());
    std::vector<int> placement(s.num_tasks(), -1);
    const std::size_t density = rng.below(5);
    for (std::size_t j = 0; j < s.num_tasks(); ++j)
      if (rng.below(4) < density) {
        sched.assign(j, rng.below(s.num_servers()));
        placement[j] = static_cast<int>(*sched.server_of(j));
      }
    const double h = hit_ratio(sched, s);
    if (h >= 0.0 && h <= 1.0) ++bounded;
    if (i % 500 == 0) expect(h == edgesched::testing::oracle_hit_ratio(s, placement), "hit_ratio oracle");
  }
  expect(bounded == 10000, "hit_ratio bounds");

  std::string detail = fmt("trivial examples, %zu response sums, %zu/10000 hit ratios in [0,1]", sum_checks, bounded);
  if (!failed.empty()) {
    std::sort(failed.begin(), failed.end());
    failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
    detail += "; failed:";
    for (const std::string& f : failed) detail += " " + f + ";";
  }
  return {failed.empty(), detail};
}

// Storage-free tasks fit only on server 0, storage-heavy ones only on server 1.
Scenario single_feasible_server_scenario() {
  ScenarioBuilder b(1);
  b.server(0, 1.0, 1, 100.0, 1.0);
  b.server(0, 1.0, 1, 1.0, 1000.0);
  b.user(0, Service::CrowdCounting, {TaskDef{.ram_mb = 5.0, .deadline_s = 250.0}});
  b.user(0, Service::FaceRecognition, {TaskDef{.ram_mb = 0.1, .deadline_s = 200.0, .storage_mb = 50.0}});
  b.user(0, Service::MLDevCrowd, {TaskDef{.ram_mb = 10.0, .deadline_s = 300.0}});
  b.user(0, Service::MLDevFace, {TaskDef{.ram_mb = 0.1, .deadline_s = 350.0, .storage_mb = 100.0}});
  b.user(0, Service::CrowdCounting, {TaskDef{.ram_mb = 20.0, .deadline_s = 400.0}});
  return b.build();
}

Outcome edf_degeneracy() {
  std::vector<Scenario> cases{single_feasible_server_scenario()};
  const ServiceCatalog& catalog = ServiceCatalog::builtin();
  for (std::int64_t seed = 0; seed < 10; ++seed) {
    ScenarioSpec spec = preset("desk", seed);
    spec.servers = {catalog.server_model("xeon-e5645")};
    cases.push_back(generate_scenario(spec));
  }
  std::size_t equal = 0, total = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Scenario& s = cases[i];
    const Schedule edf = edf_schedule(s, kDefaultUtilizationThreshold);
    for (std::int64_t seed = 0; seed < 3; ++seed) {
      arl::AgentConfig cfg;
      cfg.dqn.hidden_dims = {16};
      cfg.dqn.seed = seed;
      arl::Agent agent(s, cfg);
      agent.force_epsilon(1.0);
      std::vector<Assignment> placed;
      const arl::StepObserver obs = [&](const arl::StepTrace& t, const arl::EpisodeState&) {
        if (t.outcome.server_ok) placed.push_back({t.action.task, t.action.server});
      };
      // Later episodes must replay it too; the network never gets a say.
      bool same = true;
      for (int e = 0; e < 3; ++e) {
        placed.clear();
        const arl::EpisodeRecord rec = arl::run_episode(agent, obs, static_cast<std::size_t>(e));
        same = same && rec.schedule == edf &&
               placed == std::vector<Assignment>(edf.assignments().begin(), edf.assignments().end());
      }
      equal += same ? 1 : 0;
      ++total;
    }
  }
  return {equal == total, fmt("%zu/%zu forced-exploration runs replay the EDF assignment sequence", equal, total)};
}

Outcome determinism() {
  const Scenario s = generate_scenario(preset("desk", 0));
  arl::AgentConfig cfg;
  cfg.dqn.hidden_dims = {32, 32};
  const arl::ConvergenceConfig conv{0.98, 100, 150};
  const auto once = [&](arl::Variant v) {
    cfg.variant = v;
    nlohmann::json doc{{"config", to_json(cfg)}, {"result", train_result_to_json(arl::train(s, cfg, conv, 11), s)}};
    return doc.dump(2);
  };
  const std::string a1 = once(arl::Variant::Agile), a2 = once(arl::Variant::Agile);
  const std::string v1 = once(arl::Variant::Vanilla), v2 = once(arl::Variant::Vanilla);
  const std::string e1 = schedule_to_json(edf_schedule(s), s).dump(2);
  const std::string e2 = schedule_to_json(edf_schedule(s), s).dump(2);
  const bool ok = a1 == a2 && v1 == v2 && e1 == e2;
  return {ok, fmt("arl result %zu bytes, vrl result %zu bytes, edf schedule %zu bytes; identical on re-run: %s",
                  a1.size(), v1.size(), e1.size(), ok ? "yes" : "no")};
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "oracle optimality on tiny scenarios", oracle_optimality},
      {2, "desk preset comparison", desk_comparison},
      {3, "convergence detector examples", convergence_examples},
      {4, "gradient check", gradient_check},
      {5, "mask invariants", mask_invariants},
      {6, "evaluation math", math_suite},
      {7, "EDF degeneracy", edf_degeneracy},
      {8, "determinism", determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
