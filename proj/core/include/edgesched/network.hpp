#pragma once

#include <cstddef>

#include "edgesched/scenario.hpp"
#include "edgesched/schedule.hpp"

namespace edgesched {

/// Round trip between a user and a server in seconds:
/// 2 * (wireless latency + wired shortest-path latency).
double rtt_user_server(const EdgeUser& user, const EdgeServer& server, const Topology& topology);

/// Wired round trip between the servers hosting `task` and its predecessor.
/// Zero without a predecessor, with an unplaced predecessor, or when both
/// share a server.
double rtt_inter_task(const Scenario& scenario, std::size_t task, std::size_t server,
                      const Schedule& schedule);

/// ram_mb of the task over the bottleneck bandwidth of the user->server path,
/// plus the topology's constant setup time.
double provisioning_time(const Task& task, const EdgeUser& user, const EdgeServer& server,
                         const Topology& topology);

} // namespace edgesched
