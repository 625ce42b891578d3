#include <gtest/gtest.h>

#include <functional>
#include <limits>

#include "builders.hpp"
#include "edgesched/errors.hpp"
#include "edgesched/evaluation.hpp"
#include "edgesched/network.hpp"

using namespace edgesched;
using edgesched::testing::ScenarioBuilder;
using edgesched::testing::TaskDef;

namespace {

// Floyd-Warshall over the link list, written independently of Topology.
std::vector<std::vector<double>> all_pairs(const Topology& topo) {
  const std::size_t n = topo.zones().size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const Link& l : topo.links()) {
    d[l.a.value][l.b.value] = std::min(d[l.a.value][l.b.value], l.latency_ms);
    d[l.b.value][l.a.value] = std::min(d[l.b.value][l.a.value], l.latency_ms);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Every latency-shortest simple path from a to b, by depth-first enumeration
// pruned with the exact distances.
std::vector<std::vector<std::uint32_t>> shortest_paths(const Topology& topo, std::uint32_t a, std::uint32_t b) {
  const auto d = all_pairs(topo);
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> path{a};
  std::vector<bool> seen(topo.zones().size(), false);
  seen[a] = true;
  std::function<void(std::uint32_t, double)> walk = [&](std::uint32_t at, double sofar) {
    if (at == b) {
      if (sofar == d[a][b]) out.push_back(path);
      return;
    }
    for (const Link& l : topo.links()) {
      std::uint32_t next;
      if (l.a.value == at) next = l.b.value;
      else if (l.b.value == at) next = l.a.value;
      else continue;
      if (seen[next] || sofar + l.latency_ms + d[next][b] > d[a][b]) continue;
      seen[next] = true;
      path.push_back(next);
      walk(next, sofar + l.latency_ms);
      path.pop_back();
      seen[next] = false;
    }
  };
  walk(a, 0.0);
  return out;
}

double path_bottleneck(const Topology& topo, const std::vector<std::uint32_t>& path) {
  double bw = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    double best = 0.0;
    for (const Link& l : topo.links()) {
      const bool match = (l.a.value == path[i] && l.b.value == path[i + 1]) ||
                         (l.b.value == path[i] && l.a.value == path[i + 1]);
      // Parallel links: the path uses the lowest-latency one; among equals, keep the widest.
      if (match) best = std::max(best, l.bandwidth_mbps);
    }
    bw = std::min(bw, best);
  }
  return bw;
}

} // namespace

TEST(Network, ZeroHopRttIsTwiceWireless) {
  ScenarioBuilder b(1);
  b.wireless_ms(1.0);
  b.server(0, 1e9, 1);
  b.user(0, Service::CrowdCounting, {TaskDef{}});
  const Scenario s = b.build();
  EXPECT_EQ(rtt_user_server(s.users()[0], s.servers()[0], s.topology()), 0.002);
}

TEST(Network, OneLinkRtt) {
  ScenarioBuilder b(2);
  b.wireless_ms(1.0).link(0, 1, 3.0);
  b.server(1, 1e9, 1);
  b.user(0, Service::CrowdCounting, {TaskDef{}});
  const Scenario s = b.build();
  EXPECT_EQ(rtt_user_server(s.users()[0], s.servers()[0], s.topology()), 0.008);
}

TEST(Network, InterTaskTerm) {
  ScenarioBuilder b(2);
  b.link(0, 1, 3.0);
  b.server(0, 1e9, 1);
  b.server(1, 1e9, 1);
  b.user(0, Service::CrowdCounting, {TaskDef{}, TaskDef{.chained = true}});
  const Scenario s = b.build();
  Schedule sched(2, 2);
  EXPECT_EQ(rtt_inter_task(s, 0, 0, sched), 0.0); // no predecessor
  EXPECT_EQ(rtt_inter_task(s, 1, 1, sched), 0.0); // predecessor not placed yet
  sched.assign(0, 0);
  EXPECT_EQ(rtt_inter_task(s, 1, 0, sched), 0.0); // co-located
  EXPECT_EQ(rtt_inter_task(s, 1, 1, sched), 0.006);
}

TEST(Network, ProvisioningIsRamOverBottleneck) {
  ScenarioBuilder b(2);
  b.link(0, 1, 1.0, 10.0);
  b.server(1, 1e9, 1);
  b.user(0, Service::CrowdCounting, {TaskDef{.ram_mb = 10.0}});
  b.user(0, Service::CrowdCounting, {TaskDef{.ram_mb = 1.0}});
  const Scenario s = b.build();
  EXPECT_EQ(provisioning_time(s.tasks()[0], s.users()[0], s.servers()[0], s.topology()), 1.0);

  ScenarioBuilder c(1);
  c.local_bandwidth(1.0);
  c.server(0, 1e9, 1);
  c.user(0, Service::CrowdCounting, {TaskDef{.ram_mb = 1.0}});
  const Scenario t = c.build();
  EXPECT_EQ(provisioning_time(t.tasks()[0], t.users()[0], t.servers()[0], t.topology()), 1.0);
}

TEST(Network, SetupTimeAdds) {
  ScenarioBuilder b(1);
  b.local_bandwidth(4.0).setup_s(0.5);
  b.server(0, 1e9, 1);
  b.user(0, Service::CrowdCounting, {TaskDef{.ram_mb = 2.0}});
  const Scenario s = b.build();
  EXPECT_EQ(provisioning_time(s.tasks()[0], s.users()[0], s.servers()[0], s.topology()), 1.0);
}

TEST(Network, RoutesMatchAllPairsOracleOnPaperPreset) {
  for (std::int64_t seed : {0, 1, 2}) {
    const Scenario s = generate_scenario(preset("paper", seed));
    const Topology& topo = s.topology();
    const auto d = all_pairs(topo);
    for (ZoneId a : topo.zones()) {
      for (ZoneId b : topo.zones()) {
        const Route& r = topo.route(a, b);
        EXPECT_EQ(r.latency_ms, d[a.value][b.value]);
        EXPECT_EQ(&r, &topo.route(b, a)) << "routes must be shared by both directions";
      }
    }
  }
}

TEST(Network, FarthestUserServerRttMatchesOracle) {
  const Scenario s = generate_scenario(preset("paper", 0));
  const Topology& topo = s.topology();
  const auto d = all_pairs(topo);
  double worst = 0.0, oracle = 0.0;
  for (const EdgeUser& u : s.users()) {
    for (const EdgeServer& srv : s.servers()) {
      worst = std::max(worst, rtt_user_server(u, srv, topo));
      oracle = std::max(oracle, 2.0 * (topo.wireless_latency_ms() + d[u.zone.value][srv.zone.value]) / 1000.0);
    }
  }
  EXPECT_EQ(worst, oracle);
  EXPECT_GT(worst, 2.0 * topo.wireless_latency_ms() / 1000.0);
}

TEST(Network, ProvisioningBottleneckMatchesPathEnumeration) {
  const Scenario s = generate_scenario(preset("paper", 0));
  const Topology& topo = s.topology();
  std::size_t checked = 0;
  for (std::size_t j = 0; j < s.num_tasks(); j += 7) {
    const EdgeUser& u = s.users()[s.owner_index(j)];
    for (const EdgeServer& srv : s.servers()) {
      const std::uint32_t lo = std::min(u.zone.value, srv.zone.value);
      const std::uint32_t hi = std::max(u.zone.value, srv.zone.value);
      double expected;
      if (lo == hi) {
        expected = s.tasks()[j].ram_mb / topo.bandwidth_mbps() + topo.provisioning_setup_s();
      } else {
        auto paths = shortest_paths(topo, lo, hi);
        ASSERT_FALSE(paths.empty());
        // Documented tie-break: fewest hops, then smallest zone sequence.
        std::sort(paths.begin(), paths.end(), [](const auto& x, const auto& y) {
          return x.size() != y.size() ? x.size() < y.size() : x < y;
        });
        expected = s.tasks()[j].ram_mb / path_bottleneck(topo, paths.front()) + topo.provisioning_setup_s();
      }
      EXPECT_EQ(provisioning_time(s.tasks()[j], u, srv, topo), expected);
      ++checked;
    }
  }
  EXPECT_GT(checked, 40u);
}

TEST(Network, UnknownZoneAndUnreachable) {
  Topology topo({ZoneId{0}, ZoneId{1}}, {}, {ZoneId{0}}, 1.0, 10.0);
  EXPECT_FALSE(topo.connected());
  try {
    (void)topo.route(ZoneId{0}, ZoneId{1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unreachable);
  }
  try {
    (void)topo.route(ZoneId{0}, ZoneId{9});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFound);
  }
  const Topology joined = topo.with_link({ZoneId{0}, ZoneId{1}, 2.0, 5.0});
  EXPECT_TRUE(joined.connected());
  EXPECT_EQ(joined.route(ZoneId{1}, ZoneId{0}).latency_ms, 2.0);
  EXPECT_EQ(joined.route(ZoneId{1}, ZoneId{0}).bottleneck_mbps, 5.0);
}

TEST(Network, InvalidTopologyRejected) {
  const auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code([] { Topology({ZoneId{0}}, {{ZoneId{0}, ZoneId{0}, 1.0, 1.0}}, {}, 1.0, 1.0); }),
            ErrorCode::InvalidSpec);
  EXPECT_EQ(code([] { Topology({ZoneId{0}, ZoneId{1}}, {{ZoneId{0}, ZoneId{1}, 0.0, 1.0}}, {}, 1.0, 1.0); }),
            ErrorCode::InvalidSpec);
  EXPECT_EQ(code([] { Topology({ZoneId{0}, ZoneId{0}}, {}, {}, 1.0, 1.0); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(code([] { Topology({}, {}, {}, 1.0, 1.0); }), ErrorCode::InvalidSpec);
}

TEST(Network, EqualLatencyTieBreaksByHopsThenZoneSequence) {
  // 0-1-3 and 0-2-3 both cost 2 ms; 0-3 direct costs 2 ms with one hop.
  Topology topo({ZoneId{0}, ZoneId{1}, ZoneId{2}, ZoneId{3}},
                {{ZoneId{0}, ZoneId{2}, 1.0, 7.0},
                 {ZoneId{2}, ZoneId{3}, 1.0, 7.0},
                 {ZoneId{0}, ZoneId{1}, 1.0, 3.0},
                 {ZoneId{1}, ZoneId{3}, 1.0, 3.0}},
                {ZoneId{0}}, 1.0, 10.0);
  const Route& r = topo.route(ZoneId{3}, ZoneId{0});
  EXPECT_EQ(r.path, (std::vector<ZoneId>{ZoneId{0}, ZoneId{1}, ZoneId{3}}));
  EXPECT_EQ(r.bottleneck_mbps, 3.0);
  const Topology direct = topo.with_link({ZoneId{0}, ZoneId{3}, 2.0, 1.0});
  EXPECT_EQ(direct.route(ZoneId{0}, ZoneId{3}).hops(), 1u);
}
