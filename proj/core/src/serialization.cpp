#include "edgesched/serialization.hpp"

#include <fstream>
#include <sstream>

#include "edgesched/errors.hpp"
#include "edgesched/evaluation.hpp"

namespace edgesched {

using nlohmann::json;

namespace {

constexpr const char* kScenarioFormat = "edgesched-scenario";
constexpr const char* kNetworkFormat = "edgesched-qnetwork";
constexpr int kVersion = 1;

json task_to_json(const Task& t) {
  return json{{"id", t.id.value},
              {"user", t.user.value},
              {"arrival_s", t.arrival_s},
              {"period_s", t.period_s},
              {"deadline_s", t.deadline_s},
              {"cpu_cycles_per_mb", t.cpu_cycles_per_mb},
              {"ram_mb", t.ram_mb},
              {"storage_mb", t.storage_mb},
              {"predecessor", t.predecessor ? json(t.predecessor->value) : json(nullptr)},
              {"criticality_rank", t.criticality_rank}};
}

Task task_from_json(const json& j) {
  Task t;
  t.id = TaskId{j.at("id").get<std::uint32_t>()};
  t.user = UserId{j.at("user").get<std::uint32_t>()};
  t.arrival_s = j.value("arrival_s", 0.0);
  t.period_s = j.value("period_s", 0.0);
  t.deadline_s = j.at("deadline_s").get<double>();
  t.cpu_cycles_per_mb = j.at("cpu_cycles_per_mb").get<double>();
  t.ram_mb = j.at("ram_mb").get<double>();
  t.storage_mb = j.value("storage_mb", 0.0);
  if (j.contains("predecessor") && !j.at("predecessor").is_null())
    t.predecessor = TaskId{j.at("predecessor").get<std::uint32_t>()};
  t.criticality_rank = j.at("criticality_rank").get<int>();
  return t;
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    raise(ErrorCode::InvalidSpec, e.what());
  }
}

} // namespace

json scenario_to_json(const Scenario& scenario) {
  const Topology& topo = scenario.topology();
  json zones = json::array();
  for (ZoneId z : topo.zones()) zones.push_back(z.value);
  json links = json::array();
  for (const Link& l : topo.links()) links.push_back(json::array({l.a.value, l.b.value, l.latency_ms, l.bandwidth_mbps}));
  json server_zones = json::array();
  for (ZoneId z : topo.server_zones()) server_zones.push_back(z.value);

  json crit = json::object();
  for (Service s : kAllServices) crit[std::string(to_string(s))] = criticality_rank(s, scenario.criticality_map());

  json servers = json::array();
  for (const EdgeServer& s : scenario.servers()) {
    servers.push_back(json{{"id", s.id.value},
                           {"zone", s.zone.value},
                           {"model", s.model},
                           {"cpu_freq_hz", s.cpu_freq_hz},
                           {"cores", s.cores},
                           {"ram_mb", s.ram_mb},
                           {"storage_mb", s.storage_mb}});
  }

  json users = json::array();
  for (const EdgeUser& u : scenario.users()) {
    json workload = json::array();
    for (const Task& t : u.workload) workload.push_back(task_to_json(t));
    users.push_back(json{{"id", u.id.value},
                         {"zone", u.zone.value},
                         {"service", std::string(to_string(u.service))},
                         {"workload", std::move(workload)}});
  }

  return json{{"format", kScenarioFormat},
              {"version", kVersion},
              {"seed", scenario.seed()},
              {"criticality_map", std::move(crit)},
              {"topology",
               {{"zones", std::move(zones)},
                {"links", std::move(links)},
                {"server_zones", std::move(server_zones)},
                {"wireless_latency_ms", topo.wireless_latency_ms()},
                {"bandwidth_mbps", topo.bandwidth_mbps()},
                {"provisioning_setup_s", topo.provisioning_setup_s()}}},
              {"servers", std::move(servers)},
              {"users", std::move(users)}};
}

Scenario scenario_from_json(const json& doc) {
  return guarded([&] {
    if (doc.contains("format") && doc.at("format") != kScenarioFormat)
      raise(ErrorCode::InvalidSpec, "not a scenario document");
    if (doc.contains("version") && doc.at("version") != kVersion)
      raise(ErrorCode::InvalidSpec, "unsupported scenario version");
    const json& t = doc.at("topology");
    std::vector<ZoneId> zones;
    for (const json& z : t.at("zones")) zones.push_back(ZoneId{z.get<std::uint32_t>()});
    std::vector<Link> links;
    for (const json& l : t.at("links")) {
      if (!l.is_array() || l.size() != 4) raise(ErrorCode::InvalidSpec, "links are [a, b, latency_ms, bandwidth_mbps]");
      links.push_back({ZoneId{l[0].get<std::uint32_t>()}, ZoneId{l[1].get<std::uint32_t>()}, l[2].get<double>(),
                       l[3].get<double>()});
    }
    std::vector<ZoneId> server_zones;
    for (const json& z : t.at("server_zones")) server_zones.push_back(ZoneId{z.get<std::uint32_t>()});
    Topology topology(std::move(zones), std::move(links), std::move(server_zones),
                      t.at("wireless_latency_ms").get<double>(), t.at("bandwidth_mbps").get<double>(),
                      t.value("provisioning_setup_s", 0.0));

    CriticalityMap crit = kDefaultCriticality;
    if (doc.contains("criticality_map")) {
      for (const auto& [name, rank] : doc.at("criticality_map").items())
        crit[static_cast<std::size_t>(service_from_string(name))] = rank.get<int>();
    }

    std::vector<EdgeServer> servers;
    for (const json& s : doc.at("servers")) {
      servers.push_back({ServerId{s.at("id").get<std::uint32_t>()}, ZoneId{s.at("zone").get<std::uint32_t>()},
                         s.value("model", std::string{}), s.at("cpu_freq_hz").get<double>(),
                         s.at("cores").get<int>(), s.at("ram_mb").get<double>(), s.at("storage_mb").get<double>()});
    }

    std::vector<EdgeUser> users;
    for (const json& u : doc.at("users")) {
      EdgeUser user;
      user.id = UserId{u.at("id").get<std::uint32_t>()};
      user.zone = ZoneId{u.at("zone").get<std::uint32_t>()};
      user.service = service_from_string(u.at("service").get<std::string>());
      for (const json& task : u.at("workload")) user.workload.push_back(task_from_json(task));
      users.push_back(std::move(user));
    }
    return Scenario(std::move(users), std::move(servers), std::move(topology), crit, doc.at("seed").get<std::int64_t>());
  });
}

void write_json(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) raise(ErrorCode::IoError, "write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::exception& e) {
    raise(ErrorCode::InvalidSpec, path.string() + ": " + e.what());
  }
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  write_json(scenario_to_json(scenario), path);
}

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json(path)); }

json schedule_to_json(const Schedule& schedule, const Scenario& scenario) {
  json assignments = json::array();
  for (const Assignment& a : schedule.assignments()) {
    assignments.push_back(json{{"task", scenario.tasks()[a.task].id.value},
                               {"server", scenario.servers()[a.server].id.value}});
  }
  return json{{"assignments", std::move(assignments)},
              {"placed", schedule.assignments().size()},
              {"hit_tasks", hit_task_count(scenario, schedule)},
              {"hit_ratio", hit_ratio(schedule, scenario)},
              {"provisioning_s", provisioning_total(scenario, schedule)}};
}

Schedule schedule_from_json(const json& doc, const Scenario& scenario) {
  return guarded([&] {
    Schedule schedule(scenario.num_tasks(), scenario.num_servers());
    for (const json& a : doc.at("assignments")) {
      schedule.assign(scenario.task_index(TaskId{a.at("task").get<std::uint32_t>()}),
                      scenario.server_index(ServerId{a.at("server").get<std::uint32_t>()}));
    }
    return schedule;
  });
}

json qnetwork_to_json(const rl::QNetwork& net) {
  json layers = json::array();
  for (const rl::DenseLayer& l : net.layers()) {
    layers.push_back(json{{"inputs", l.inputs}, {"outputs", l.outputs}, {"weights", l.weights}, {"bias", l.bias}});
  }
  return json{{"format", kNetworkFormat}, {"version", kVersion}, {"layers", std::move(layers)}};
}

rl::QNetwork qnetwork_from_json(const json& doc) {
  return guarded([&] {
    if (doc.at("format") != kNetworkFormat || doc.at("version") != kVersion)
      raise(ErrorCode::InvalidSpec, "unsupported network checkpoint");
    const json& layers = doc.at("layers");
    if (layers.empty()) raise(ErrorCode::ShapeError, "checkpoint has no layers");
    std::vector<std::size_t> hidden;
    for (std::size_t i = 0; i + 1 < layers.size(); ++i) hidden.push_back(layers[i].at("outputs").get<std::size_t>());
    rl::QNetwork net = rl::QNetwork::zeros(layers.front().at("inputs").get<std::size_t>(), hidden,
                                           layers.back().at("outputs").get<std::size_t>());
    for (std::size_t i = 0; i < layers.size(); ++i) {
      rl::DenseLayer& l = net.layers()[i];
      if (layers[i].at("inputs").get<std::size_t>() != l.inputs)
        raise(ErrorCode::ShapeError, "layer widths do not chain");
      auto w = layers[i].at("weights").get<std::vector<double>>();
      auto b = layers[i].at("bias").get<std::vector<double>>();
      if (w.size() != l.weights.size() || b.size() != l.bias.size())
        raise(ErrorCode::ShapeError, "layer parameter count mismatch");
      l.weights = std::move(w);
      l.bias = std::move(b);
    }
    return net;
  });
}

json to_json(const rl::DqnHyperparams& h) {
  return json{{"gamma", h.gamma},
              {"learning_rate", h.learning_rate},
              {"batch_size", h.batch_size},
              {"target_update_interval", h.target_update_interval},
              {"epsilon_start", h.epsilon_start},
              {"epsilon_end", h.epsilon_end},
              {"epsilon_decay", h.epsilon_decay},
              {"replay_capacity", h.replay_capacity},
              {"hidden_dims", h.hidden_dims},
              {"grad_clip_norm", h.grad_clip_norm},
              {"seed", h.seed}};
}

json to_json(const arl::RewardConfig& r) {
  return json{{"positive", r.positive}, {"negative", r.negative}, {"criticality_bonus", r.criticality_bonus}};
}

json to_json(const arl::AgentConfig& c) {
  return json{{"variant", std::string(arl::to_string(c.variant))},
              {"dqn", to_json(c.dqn)},
              {"reward", to_json(c.reward)},
              {"utilization_threshold", c.utilization_threshold},
              {"vanilla_step_cap_factor", c.vanilla_step_cap_factor}};
}

json to_json(const arl::ConvergenceConfig& c) {
  return json{{"threshold", c.threshold}, {"window", c.window}, {"max_episodes", c.max_episodes}};
}

namespace {

template <class T>
void take(const json& doc, const char* key, T& field) {
  if (doc.contains(key)) field = doc.at(key).get<T>();
}

void reject_unknown(const json& doc, std::initializer_list<const char*> known, const char* where) {
  for (const auto& [key, value] : doc.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) raise(ErrorCode::InvalidConfig, std::string("unknown key '") + key + "' in " + where);
  }
}

} // namespace

arl::AgentConfig agent_config_from_json(const json& doc, arl::AgentConfig base) {
  try {
    reject_unknown(doc, {"variant", "dqn", "reward", "utilization_threshold", "vanilla_step_cap_factor"}, "agent config");
    if (doc.contains("variant")) {
      const auto v = doc.at("variant").get<std::string>();
      if (v == "arl") base.variant = arl::Variant::Agile;
      else if (v == "vrl") base.variant = arl::Variant::Vanilla;
      else raise(ErrorCode::InvalidConfig, "variant must be arl or vrl");
    }
    take(doc, "utilization_threshold", base.utilization_threshold);
    take(doc, "vanilla_step_cap_factor", base.vanilla_step_cap_factor);
    if (doc.contains("dqn")) {
      const json& d = doc.at("dqn");
      reject_unknown(d, {"gamma", "learning_rate", "batch_size", "target_update_interval", "epsilon_start",
                         "epsilon_end", "epsilon_decay", "replay_capacity", "hidden_dims", "grad_clip_norm", "seed"},
                     "dqn config");
      take(d, "gamma", base.dqn.gamma);
      take(d, "learning_rate", base.dqn.learning_rate);
      take(d, "batch_size", base.dqn.batch_size);
      take(d, "target_update_interval", base.dqn.target_update_interval);
      take(d, "epsilon_start", base.dqn.epsilon_start);
      take(d, "epsilon_end", base.dqn.epsilon_end);
      take(d, "epsilon_decay", base.dqn.epsilon_decay);
      take(d, "replay_capacity", base.dqn.replay_capacity);
      take(d, "hidden_dims", base.dqn.hidden_dims);
      take(d, "grad_clip_norm", base.dqn.grad_clip_norm);
      take(d, "seed", base.dqn.seed);
    }
    if (doc.contains("reward")) {
      const json& r = doc.at("reward");
      reject_unknown(r, {"positive", "negative", "criticality_bonus"}, "reward config");
      take(r, "positive", base.reward.positive);
      take(r, "negative", base.reward.negative);
      take(r, "criticality_bonus", base.reward.criticality_bonus);
    }
  } catch (const json::exception& e) {
    raise(ErrorCode::InvalidConfig, e.what());
  }
  base.validate();
  return base;
}

arl::ConvergenceConfig convergence_from_json(const json& doc, arl::ConvergenceConfig base) {
  try {
    reject_unknown(doc, {"threshold", "window", "max_episodes"}, "convergence config");
    take(doc, "threshold", base.threshold);
    take(doc, "window", base.window);
    take(doc, "max_episodes", base.max_episodes);
  } catch (const json::exception& e) {
    raise(ErrorCode::InvalidConfig, e.what());
  }
  base.validate();
  return base;
}

json train_result_to_json(const arl::TrainResult& r, const Scenario& scenario) {
  json hit = json::array(), train_hit = json::array(), reward = json::array(), steps = json::array(),
       hit_tasks = json::array(), loss = json::array(), truncated = json::array();
  for (const arl::EpisodeMetrics& m : r.episodes) {
    hit.push_back(m.hit_ratio);
    train_hit.push_back(m.train_hit_ratio);
    reward.push_back(m.total_reward);
    steps.push_back(m.steps);
    hit_tasks.push_back(m.hit_tasks);
    loss.push_back(m.mean_loss);
    truncated.push_back(m.truncated);
  }
  return json{{"algorithm", std::string(arl::to_string(r.variant))},
              {"seed", r.seed},
              {"episodes_run", r.episodes.size()},
              {"convergence_episode", r.convergence_episode ? json(*r.convergence_episode) : json(nullptr)},
              {"best_hit_ratio", r.best_hit_ratio},
              {"final_greedy_hit_ratio", r.final_greedy_hit_ratio},
              {"total_steps", r.total_steps},
              {"train_updates", r.train_updates},
              {"truncated_episodes", r.truncated_episodes},
              {"parameter_count", r.parameter_count},
              {"series",
               {{"hit_ratio", std::move(hit)},
                {"train_hit_ratio", std::move(train_hit)},
                {"total_reward", std::move(reward)},
                {"steps", std::move(steps)},
                {"hit_tasks", std::move(hit_tasks)},
                {"mean_loss", std::move(loss)},
                {"truncated", std::move(truncated)}}},
              {"best_schedule", schedule_to_json(r.best_schedule, scenario)}};
}

} // namespace edgesched
