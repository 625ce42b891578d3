#pragma once

#include <cstddef>
#include <limits>
#include <unordered_map>
#include <vector>

#include "edgesched/types.hpp"

namespace edgesched {

/// Undirected wired link between two base-station zones.
struct Link {
  ZoneId a;
  ZoneId b;
  double latency_ms = 1.0;
  double bandwidth_mbps = 100.0; ///< megabytes per second

  friend bool operator==(const Link&, const Link&) = default;
};

/// Shortest wired path between two zones. Ordered from the lower zone id.
struct Route {
  std::vector<ZoneId> path;
  double latency_ms = 0.0;
  /// Minimum link bandwidth on the path; +inf when the path has no links.
  double bottleneck_mbps = std::numeric_limits<double>::infinity();

  [[nodiscard]] std::size_t hops() const noexcept { return path.empty() ? 0 : path.size() - 1; }
};

/// Zoned partial-mesh network. Latencies are kept in milliseconds so a
/// scenario file round-trips without unit conversion.
///
/// Routes are latency-weighted shortest paths; ties are broken by fewer hops,
/// then by the lexicographically smallest zone sequence. Every route is
/// computed from the lower zone id, which makes all queries symmetric.
class Topology {
public:
  Topology() = default;
  /// Throws Error{InvalidSpec} on non-positive latency/bandwidth, unknown
  /// zones, duplicate zones, or self-links. Connectivity is not required here.
  Topology(std::vector<ZoneId> zones, std::vector<Link> links, std::vector<ZoneId> server_zones,
           double wireless_latency_ms, double bandwidth_mbps, double provisioning_setup_s = 0.0);

  [[nodiscard]] const std::vector<ZoneId>& zones() const noexcept { return zones_; }
  [[nodiscard]] const std::vector<Link>& links() const noexcept { return links_; }
  [[nodiscard]] const std::vector<ZoneId>& server_zones() const noexcept { return server_zones_; }
  [[nodiscard]] double wireless_latency_ms() const noexcept { return wireless_latency_ms_; }
  /// Intra-zone transfer bandwidth, used when user and server share a zone.
  [[nodiscard]] double bandwidth_mbps() const noexcept { return bandwidth_mbps_; }
  [[nodiscard]] double provisioning_setup_s() const noexcept { return provisioning_setup_s_; }

  [[nodiscard]] bool has_zone(ZoneId zone) const noexcept;
  [[nodiscard]] bool connected() const noexcept;

  /// Throws Error{NotFound} for unknown zones, Error{Unreachable} when no path exists.
  [[nodiscard]] const Route& route(ZoneId from, ZoneId to) const;

  /// Copy with one more link; routes are recomputed.
  [[nodiscard]] Topology with_link(const Link& link) const;

  friend bool operator==(const Topology& lhs, const Topology& rhs) noexcept;

private:
  void build_routes();
  [[nodiscard]] std::size_t zone_index(ZoneId zone) const;

  std::vector<ZoneId> zones_;
  std::vector<Link> links_;
  std::vector<ZoneId> server_zones_;
  double wireless_latency_ms_ = 2.0;
  double bandwidth_mbps_ = 100.0;
  double provisioning_setup_s_ = 0.0;

  std::unordered_map<ZoneId, std::size_t> index_;
  std::vector<Route> routes_; // [i * n + j] for i <= j; unreachable routes have an empty path
};

} // namespace edgesched
