#include "edgesched/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <unordered_set>

#include "edgesched/errors.hpp"

namespace edgesched {

namespace {

std::string zone_name(ZoneId zone) { return "zone " + std::to_string(zone.value); }

// Dijkstra label. Ordering is (latency, hops, zone sequence), which is
// preserved under extension by a common edge, so label-setting stays exact.
struct Label {
  double latency_ms = 0.0;
  std::vector<ZoneId> path;
  double bottleneck = std::numeric_limits<double>::infinity();
};

bool better(const Label& lhs, const Label& rhs) {
  if (lhs.latency_ms != rhs.latency_ms) return lhs.latency_ms < rhs.latency_ms;
  if (lhs.path.size() != rhs.path.size()) return lhs.path.size() < rhs.path.size();
  return lhs.path < rhs.path;
}

} // namespace

Topology::Topology(std::vector<ZoneId> zones, std::vector<Link> links,
                   std::vector<ZoneId> server_zones, double wireless_latency_ms,
                   double bandwidth_mbps, double provisioning_setup_s)
    : zones_(std::move(zones)),
      links_(std::move(links)),
      server_zones_(std::move(server_zones)),
      wireless_latency_ms_(wireless_latency_ms),
      bandwidth_mbps_(bandwidth_mbps),
      provisioning_setup_s_(provisioning_setup_s) {
  if (zones_.empty()) raise(ErrorCode::InvalidSpec, "topology has no zones");
  for (std::size_t i = 0; i < zones_.size(); ++i) {
    if (!index_.emplace(zones_[i], i).second)
      raise(ErrorCode::InvalidSpec, "duplicate " + zone_name(zones_[i]));
  }
  if (!(wireless_latency_ms_ >= 0.0) || !std::isfinite(wireless_latency_ms_))
    raise(ErrorCode::InvalidSpec, "wireless latency must be finite and >= 0");
  if (!(bandwidth_mbps_ > 0.0) || !std::isfinite(bandwidth_mbps_))
    raise(ErrorCode::InvalidSpec, "bandwidth must be positive");
  if (!(provisioning_setup_s_ >= 0.0) || !std::isfinite(provisioning_setup_s_))
    raise(ErrorCode::InvalidSpec, "provisioning setup time must be >= 0");
  for (const Link& link : links_) {
    if (!has_zone(link.a) || !has_zone(link.b))
      raise(ErrorCode::InvalidSpec, "link references unknown zone");
    if (link.a == link.b) raise(ErrorCode::InvalidSpec, "self-link on " + zone_name(link.a));
    if (!(link.latency_ms > 0.0) || !std::isfinite(link.latency_ms))
      raise(ErrorCode::InvalidSpec, "link latency must be positive");
    if (!(link.bandwidth_mbps > 0.0) || !std::isfinite(link.bandwidth_mbps))
      raise(ErrorCode::InvalidSpec, "link bandwidth must be positive");
  }
  for (ZoneId zone : server_zones_) {
    if (!has_zone(zone)) raise(ErrorCode::InvalidSpec, "server " + zone_name(zone) + " is unknown");
  }
  build_routes();
}

bool Topology::has_zone(ZoneId zone) const noexcept { return index_.contains(zone); }

std::size_t Topology::zone_index(ZoneId zone) const {
  const auto it = index_.find(zone);
  if (it == index_.end()) raise(ErrorCode::NotFound, zone_name(zone));
  return it->second;
}

void Topology::build_routes() {
  const std::size_t n = zones_.size();
  routes_.assign(n * n, Route{});

  struct Edge {
    std::size_t to;
    double latency_ms;
    double bandwidth;
  };
  std::vector<std::vector<Edge>> adjacency(n);
  for (const Link& link : links_) {
    const std::size_t a = index_.at(link.a);
    const std::size_t b = index_.at(link.b);
    adjacency[a].push_back({b, link.latency_ms, link.bandwidth_mbps});
    adjacency[b].push_back({a, link.latency_ms, link.bandwidth_mbps});
  }

  for (std::size_t src = 0; src < n; ++src) {
    // Only sources that are the lower zone id of some pair are needed.
    std::vector<Label> best(n);
    std::vector<bool> reached(n, false);
    std::vector<bool> settled(n, false);
    best[src].path = {zones_[src]};
    reached[src] = true;

    for (;;) {
      std::size_t pick = n;
      for (std::size_t v = 0; v < n; ++v) {
        if (!reached[v] || settled[v]) continue;
        if (pick == n || better(best[v], best[pick])) pick = v;
      }
      if (pick == n) break;
      settled[pick] = true;
      for (const Edge& e : adjacency[pick]) {
        if (settled[e.to]) continue;
        Label candidate;
        candidate.latency_ms = best[pick].latency_ms + e.latency_ms;
        candidate.path = best[pick].path;
        candidate.path.push_back(zones_[e.to]);
        candidate.bottleneck = std::min(best[pick].bottleneck, e.bandwidth);
        if (!reached[e.to] || better(candidate, best[e.to])) {
          best[e.to] = std::move(candidate);
          reached[e.to] = true;
        }
      }
    }

    for (std::size_t dst = 0; dst < n; ++dst) {
      if (!(zones_[src] <= zones_[dst]) || !reached[dst]) continue;
      Route& route = routes_[src * n + dst];
      route.path = std::move(best[dst].path);
      route.latency_ms = best[dst].latency_ms;
      route.bottleneck_mbps = best[dst].bottleneck;
    }
  }
}

bool Topology::connected() const noexcept {
  const std::size_t n = zones_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (zones_[i] <= zones_[j] && routes_[i * n + j].path.empty()) return false;
    }
  }
  return true;
}

const Route& Topology::route(ZoneId from, ZoneId to) const {
  const ZoneId lo = std::min(from, to);
  const ZoneId hi = std::max(from, to);
  const std::size_t i = zone_index(lo);
  const std::size_t j = zone_index(hi);
  const Route& r = routes_[i * zones_.size() + j];
  if (r.path.empty()) raise(ErrorCode::Unreachable, zone_name(from) + " -> " + zone_name(to));
  return r;
}

Topology Topology::with_link(const Link& link) const {
  std::vector<Link> links = links_;
  links.push_back(link);
  return Topology(zones_, std::move(links), server_zones_, wireless_latency_ms_, bandwidth_mbps_,
                  provisioning_setup_s_);
}

bool operator==(const Topology& lhs, const Topology& rhs) noexcept {
  return lhs.zones_ == rhs.zones_ && lhs.links_ == rhs.links_ &&
         lhs.server_zones_ == rhs.server_zones_ &&
         lhs.wireless_latency_ms_ == rhs.wireless_latency_ms_ &&
         lhs.bandwidth_mbps_ == rhs.bandwidth_mbps_ &&
         lhs.provisioning_setup_s_ == rhs.provisioning_setup_s_;
}

// ---------------------------------------------------------------------------

double rtt_user_server(const EdgeUser& user, const EdgeServer& server, const Topology& topology) {
  const Route& route = topology.route(user.zone, server.zone);
  return 2.0 * (topology.wireless_latency_ms() + route.latency_ms) / 1000.0;
}

double rtt_inter_task(const Scenario& scenario, std::size_t task, std::size_t server,
                      const Schedule& schedule) {
  const auto pred = scenario.predecessor_index(task);
  if (!pred) return 0.0;
  const auto pred_server = schedule.server_of(*pred);
  if (!pred_server || *pred_server == server) return 0.0;
  const auto& servers = scenario.servers();
  const Route& route = scenario.topology().route(servers[*pred_server].zone, servers[server].zone);
  return 2.0 * route.latency_ms / 1000.0;
}

double provisioning_time(const Task& task, const EdgeUser& user, const EdgeServer& server,
                         const Topology& topology) {
  const Route& route = topology.route(user.zone, server.zone);
  const double bandwidth = route.hops() == 0 ? topology.bandwidth_mbps() : route.bottleneck_mbps;
  return task.ram_mb / bandwidth + topology.provisioning_setup_s();
}

} // namespace edgesched
