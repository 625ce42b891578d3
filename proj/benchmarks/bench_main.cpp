#include <benchmark/benchmark.h>

#include <vector>

#include "edgesched/arl/agent.hpp"
#include "edgesched/baselines.hpp"
#include "edgesched/evaluation.hpp"
#include "edgesched/rl/dqn.hpp"
#include "edgesched/scenario.hpp"

using namespace edgesched;

namespace {

void BM_Forward(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  const Scenario s = generate_scenario(preset("paper"));
  Rng rng(std::uint64_t{1});
  const std::size_t in = arl::state_dim(s);
  const rl::QNetwork net(in, {width, width}, s.num_tasks() * s.num_servers(), rng);
  std::vector<double> x(in, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_Forward)->Arg(64)->Arg(128);

void BM_TdTrainStep(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  const Scenario s = generate_scenario(preset("desk"));
  Rng rng(std::uint64_t{2});
  const std::size_t in = arl::state_dim(s);
  const std::size_t out = s.num_tasks() * s.num_servers();
  rl::QNetwork policy(in, {width, width}, out, rng);
  const rl::QNetwork target = policy;
  std::vector<rl::Transition> data(32);
  for (rl::Transition& t : data) {
    t.state.assign(in, rng.uniform01());
    t.next_state.assign(in, rng.uniform01());
    t.action = rng.below(out);
    t.reward = rng.uniform(-1, 4);
  }
  std::vector<const rl::Transition*> batch;
  for (const rl::Transition& t : data) batch.push_back(&t);
  const rl::DqnHyperparams hyper;
  for (auto _ : state) benchmark::DoNotOptimize(rl::td_train_step(policy, target, batch, hyper));
}
BENCHMARK(BM_TdTrainStep)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_BruteForceTiny(benchmark::State& state) {
  const Scenario s = generate_scenario(preset("tiny"));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_optimum(s, kDefaultUtilizationThreshold).hit_ratio);
}
BENCHMARK(BM_BruteForceTiny)->Unit(benchmark::kMicrosecond);

void BM_EdfPaper(benchmark::State& state) {
  const Scenario s = generate_scenario(preset("paper"));
  for (auto _ : state) benchmark::DoNotOptimize(edf_schedule(s));
}
BENCHMARK(BM_EdfPaper)->Unit(benchmark::kMicrosecond);

void BM_HitRatioPaper(benchmark::State& state) {
  const Scenario s = generate_scenario(preset("paper"));
  const Schedule sched = edf_schedule(s);
  for (auto _ : state) benchmark::DoNotOptimize(hit_ratio(sched, s));
}
BENCHMARK(BM_HitRatioPaper)->Unit(benchmark::kMicrosecond);

void BM_ArlEpisodeDesk(benchmark::State& state) {
  const Scenario s = generate_scenario(preset("desk"));
  arl::AgentConfig cfg;
  cfg.dqn.hidden_dims = {64, 64};
  arl::Agent agent(s, cfg);
  std::size_t e = 0;
  for (auto _ : state) benchmark::DoNotOptimize(arl::run_episode(agent, {}, e++).steps);
}
BENCHMARK(BM_ArlEpisodeDesk)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
