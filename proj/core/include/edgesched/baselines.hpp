#pragma once

#include <cstddef>
#include <span>

#include "edgesched/evaluation.hpp"
#include "edgesched/scenario.hpp"
#include "edgesched/schedule.hpp"

namespace edgesched {

/// Earliest-deadline pick from a set of unplaced task indices.
///
/// Only tasks that have arrived by the earliest pending arrival are eligible;
/// with all arrivals at zero this is plain EDF. Ties on deadline go to the
/// more critical task (lower rank), then to the lower task id.
/// Throws Error{Empty} on an empty set.
std::size_t edf_next_task(const Scenario& scenario, std::span<const std::size_t> unassigned);

/// EDF adapted for edge servers: each picked task goes to the lowest-id
/// server that passes the availability and capacity checks. Tasks with no
/// such server stay unplaced. Deadlines are not checked.
Schedule edf_schedule(const Scenario& scenario, double utilization_threshold = kDefaultUtilizationThreshold);

/// Tasks in Scenario::tasks() order; each goes to the feasible server with the
/// smallest post-placement residual min(1-U_P', 1-U_M', 1-U_L'), lowest id on ties.
Schedule bestfit_schedule(const Scenario& scenario, double utilization_threshold = kDefaultUtilizationThreshold);

} // namespace edgesched
