#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edgesched {

/// Strongly typed identifier; the tag keeps task, user, server and zone ids apart.
template <class Tag>
struct Id {
  std::uint32_t value{};

  friend constexpr auto operator<=>(const Id&, const Id&) = default;
};

using TaskId = Id<struct TaskTag>;
using UserId = Id<struct UserTag>;
using ServerId = Id<struct ServerTag>;
using ZoneId = Id<struct ZoneTag>;

enum class Service : std::uint8_t {
  CrowdCounting = 0,
  FaceRecognition = 1,
  MLDevCrowd = 2,
  MLDevFace = 3,
};

inline constexpr std::size_t kServiceCount = 4;
inline constexpr std::array<Service, kServiceCount> kAllServices{
    Service::CrowdCounting, Service::FaceRecognition, Service::MLDevCrowd, Service::MLDevFace};

std::string_view to_string(Service service) noexcept;
/// Throws Error{InvalidSpec} for unknown names.
Service service_from_string(std::string_view name);

/// Rank per service, indexed by the service's enum value. 1 is most critical.
using CriticalityMap = std::array<int, kServiceCount>;

inline constexpr CriticalityMap kDefaultCriticality{1, 2, 3, 4};

/// Rank of `service` under `map` (default: crowd counting 1 ... ML dev for face 4).
constexpr int criticality_rank(Service service, const CriticalityMap& map = kDefaultCriticality) noexcept {
  return map[static_cast<std::size_t>(service)];
}

/// One offloaded unit of work. Times in seconds, sizes in megabytes.
struct Task {
  TaskId id;
  UserId user;
  double arrival_s = 0.0;
  double period_s = 0.0; ///< metadata only; every task is scheduled once
  double deadline_s = 0.0;
  double cpu_cycles_per_mb = 0.0;
  double ram_mb = 0.0; ///< doubles as the data size fed to execution time
  double storage_mb = 0.0;
  std::optional<TaskId> predecessor;
  int criticality_rank = 1;

  friend bool operator==(const Task&, const Task&) = default;
};

struct EdgeServer {
  ServerId id;
  ZoneId zone;
  std::string model;
  double cpu_freq_hz = 0.0;
  int cores = 1;
  double ram_mb = 0.0;
  double storage_mb = 0.0;

  friend bool operator==(const EdgeServer&, const EdgeServer&) = default;
};

struct EdgeUser {
  UserId id;
  ZoneId zone;
  Service service = Service::CrowdCounting;
  std::vector<Task> workload;

  friend bool operator==(const EdgeUser&, const EdgeUser&) = default;
};

} // namespace edgesched

template <class Tag>
struct std::hash<edgesched::Id<Tag>> {
  std::size_t operator()(const edgesched::Id<Tag>& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
