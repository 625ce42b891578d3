#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "edgesched/baselines.hpp"
#include "edgesched/errors.hpp"
#include "edgesched/serialization.hpp"

using namespace edgesched;
using nlohmann::json;

namespace {

ErrorCode code_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("edgesched_test_" + name);
}

} // namespace

TEST(Serialization, ScenarioRoundTrip) {
  for (const char* name : {"paper", "desk", "tiny"}) {
    const Scenario s = generate_scenario(preset(name, 4));
    const json doc = scenario_to_json(s);
    EXPECT_EQ(doc.at("format"), "edgesched-scenario");
    const Scenario back = scenario_from_json(doc);
    EXPECT_EQ(scenario_to_json(back), doc);
    EXPECT_EQ(back.num_tasks(), s.num_tasks());
    EXPECT_EQ(hit_ratio(edf_schedule(back), back), hit_ratio(edf_schedule(s), s));
  }
}

TEST(Serialization, ScenarioFileRoundTrip) {
  const Scenario s = generate_scenario(preset("desk", 1));
  const auto path = temp_path("scenario.json");
  save_scenario(s, path);
  EXPECT_EQ(scenario_to_json(load_scenario(path)), scenario_to_json(s));
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { (void)load_scenario(path); }), ErrorCode::IoError);
}

TEST(Serialization, BadScenarioDocuments) {
  const json good = scenario_to_json(generate_scenario(preset("tiny", 0)));
  json wrong_format = good;
  wrong_format["format"] = "other";
  EXPECT_EQ(code_of([&] { (void)scenario_from_json(wrong_format); }), ErrorCode::InvalidSpec);
  json wrong_version = good;
  wrong_version["version"] = 99;
  EXPECT_EQ(code_of([&] { (void)scenario_from_json(wrong_version); }), ErrorCode::InvalidSpec);
  json missing = good;
  missing.erase("servers");
  EXPECT_EQ(code_of([&] { (void)scenario_from_json(missing); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of([&] { (void)scenario_from_json(json::array()); }), ErrorCode::InvalidSpec);

  const auto path = temp_path("garbage.json");
  std::ofstream(path) << "{ not json";
  EXPECT_EQ(code_of([&] { (void)load_scenario(path); }), ErrorCode::InvalidSpec);
  std::filesystem::remove(path);
}

TEST(Serialization, ScheduleRoundTrip) {
  const Scenario s = generate_scenario(preset("paper", 0));
  const Schedule sched = edf_schedule(s);
  const json doc = schedule_to_json(sched, s);
  EXPECT_EQ(doc.at("hit_ratio").get<double>(), hit_ratio(sched, s));
  EXPECT_EQ(schedule_from_json(doc, s), sched);

  json bad = doc;
  bad["assignments"].push_back(bad["assignments"][0]);
  EXPECT_THROW((void)schedule_from_json(bad, s), Error);
}

TEST(Serialization, QNetworkRoundTripIsExact) {
  Rng rng(std::uint64_t{3});
  const rl::QNetwork net(7, {5, 4}, 3, rng);
  const json doc = qnetwork_to_json(net);
  EXPECT_EQ(doc.at("format"), "edgesched-qnetwork");
  EXPECT_EQ(doc.at("layers").size(), 3u);
  EXPECT_EQ(qnetwork_from_json(json::parse(doc.dump())), net);

  json bad = doc;
  bad["layers"][1]["inputs"] = 6;
  EXPECT_EQ(code_of([&] { (void)qnetwork_from_json(bad); }), ErrorCode::ShapeError);
  json wrong = doc;
  wrong["format"] = "other";
  EXPECT_EQ(code_of([&] { (void)qnetwork_from_json(wrong); }), ErrorCode::InvalidSpec);
}

TEST(Serialization, AgentConfigRoundTrip) {
  arl::AgentConfig cfg;
  cfg.variant = arl::Variant::Vanilla;
  cfg.dqn.hidden_dims = {32, 16};
  cfg.dqn.gamma = 0.7;
  cfg.reward.criticality_bonus = 0.5;
  cfg.utilization_threshold = 0.6;
  const arl::AgentConfig back = agent_config_from_json(to_json(cfg));
  EXPECT_EQ(back.variant, cfg.variant);
  EXPECT_EQ(back.dqn, cfg.dqn);
  EXPECT_EQ(back.reward, cfg.reward);
  EXPECT_EQ(back.utilization_threshold, cfg.utilization_threshold);

  const arl::ConvergenceConfig conv{0.9, 10, 40};
  const arl::ConvergenceConfig conv_back = convergence_from_json(to_json(conv));
  EXPECT_EQ(conv_back.threshold, 0.9);
  EXPECT_EQ(conv_back.window, 10u);
  EXPECT_EQ(conv_back.max_episodes, 40u);
}

TEST(Serialization, ConfigRejectsUnknownKeysAndBadValues) {
  EXPECT_EQ(code_of([] { (void)agent_config_from_json(json{{"bogus", 1}}); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { (void)agent_config_from_json(json{{"dqn", {{"gama", 0.5}}}}); }),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { (void)agent_config_from_json(json{{"variant", "other"}}); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { (void)convergence_from_json(json{{"window", "ten"}}); }), ErrorCode::InvalidConfig);
  // Partial documents override only what they name.
  const arl::AgentConfig partial = agent_config_from_json(json{{"dqn", {{"learning_rate", 0.05}}}});
  EXPECT_EQ(partial.dqn.learning_rate, 0.05);
  EXPECT_EQ(partial.dqn.gamma, rl::DqnHyperparams{}.gamma);
}

TEST(Serialization, TrainResultJsonIsDeterministic) {
  const Scenario s = generate_scenario(preset("tiny", 1));
  arl::AgentConfig cfg;
  cfg.dqn.hidden_dims = {8};
  cfg.dqn.batch_size = 4;
  const arl::ConvergenceConfig conv{0.98, 5, 15};
  const json a = train_result_to_json(arl::train(s, cfg, conv, 2), s);
  const json b = train_result_to_json(arl::train(s, cfg, conv, 2), s);
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a.at("series").at("hit_ratio").size(), a.at("episodes_run").get<std::size_t>());
  EXPECT_FALSE(a.contains("wall_seconds"));
}
