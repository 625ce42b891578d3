#include <algorithm>
#include <string>

#include <nlohmann/json.hpp>

#include "edgesched/embedded_templates.hpp"
#include "edgesched/errors.hpp"
#include "edgesched/scenario.hpp"

namespace edgesched {

namespace {

using nlohmann::json;

Range read_range(const json& j, const char* key) {
  const json& r = j.at(key);
  if (!r.is_array() || r.size() != 2) raise(ErrorCode::InvalidSpec, std::string(key) + " must be [lo, hi]");
  Range out{r[0].get<double>(), r[1].get<double>()};
  if (out.lo > out.hi) raise(ErrorCode::InvalidSpec, std::string(key) + " has lo > hi");
  return out;
}

} // namespace

ServiceCatalog ServiceCatalog::from_json_text(std::string_view text) {
  ServiceCatalog catalog;
  try {
    const json doc = json::parse(text);
    const json& services = doc.at("services");
    for (Service service : kAllServices) {
      const json& s = services.at(std::string(to_string(service)));
      ServiceTemplate tmpl;
      tmpl.service = service;
      tmpl.chained = s.value("chained", true);
      for (const json& t : s.at("tasks")) {
        TaskTemplate task;
        task.name = t.at("name").get<std::string>();
        task.cpu_cycles_per_mb = read_range(t, "cpu_cycles_per_mb");
        task.ram_mb = read_range(t, "ram_mb");
        task.storage_mb = read_range(t, "storage_mb");
        task.deadline_s = read_range(t, "deadline_s");
        task.period_factor = t.value("period_factor", 1.0);
        if (task.cpu_cycles_per_mb.lo <= 0 || task.ram_mb.lo <= 0 || task.deadline_s.lo <= 0 ||
            task.storage_mb.lo < 0)
          raise(ErrorCode::InvalidSpec, "template " + task.name + " has non-positive demand");
        if (task.period_factor != 0.0 && task.period_factor < 1.0)
          raise(ErrorCode::InvalidSpec, "template " + task.name + " period shorter than deadline");
        tmpl.tasks.push_back(std::move(task));
      }
      if (tmpl.tasks.empty())
        raise(ErrorCode::InvalidSpec, "service " + std::string(to_string(service)) + " has no tasks");
      catalog.services_.push_back(std::move(tmpl));
    }
    for (const auto& [name, s] : doc.at("servers").items()) {
      ServerSpec spec;
      spec.model = name;
      spec.cpu_freq_hz = s.at("cpu_freq_hz").get<double>();
      spec.cores = s.at("cores").get<int>();
      spec.ram_mb = s.at("ram_mb").get<double>();
      spec.storage_mb = s.at("storage_mb").get<double>();
      catalog.servers_.emplace_back(name, spec);
    }
  } catch (const json::exception& e) {
    raise(ErrorCode::InvalidSpec, std::string("service template file: ") + e.what());
  }
  return catalog;
}

const ServiceCatalog& ServiceCatalog::builtin() {
  static const ServiceCatalog catalog = from_json_text(detail::kEmbeddedTemplatesJson);
  return catalog;
}

const ServiceTemplate& ServiceCatalog::service(Service service) const {
  return services_.at(static_cast<std::size_t>(service));
}

ServerSpec ServiceCatalog::server_model(std::string_view name) const {
  const auto it = std::find_if(servers_.begin(), servers_.end(),
                               [&](const auto& entry) { return entry.first == name; });
  if (it == servers_.end()) raise(ErrorCode::NotFound, "server model " + std::string(name));
  return it->second;
}

std::vector<std::string> ServiceCatalog::server_model_names() const {
  std::vector<std::string> names;
  for (const auto& entry : servers_) names.push_back(entry.first);
  return names;
}

} // namespace edgesched
