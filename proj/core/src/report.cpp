#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "edgesched/errors.hpp"
#include "edgesched/harness.hpp"
#include "edgesched/serialization.hpp"

namespace edgesched::harness {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) raise(ErrorCode::IoError, "write failed for " + path.string());
}

void summary_row(std::ostringstream& os, const AlgorithmSummary& s, const char* label, double Summary::*field) {
  os << to_string(s.algorithm) << ',' << label << ",," << num(s.hit_ratio.*field) << ','
     << num(s.runtime_seconds.*field) << ",,," << num(s.cpu_seconds.*field) << ',' << num(s.peak_ram_bytes.*field)
     << ",," << num(s.energy_joules.*field) << ",,," << num(s.total_steps.*field) << '\n';
}

const char* colour(Algorithm a) {
  switch (a) {
  case Algorithm::Arl: return "#1b9e77";
  case Algorithm::Vrl: return "#d95f02";
  case Algorithm::Edf: return "#7570b3";
  case Algorithm::BestFit: return "#e7298a";
  }
  return "#000000";
}

} // namespace

std::string to_csv(const AggregateReport& report) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const AlgorithmSummary& s : report.summaries) {
    for (const RunMetrics& r : report.runs) {
      if (r.algorithm != s.algorithm) continue;
      os << to_string(r.algorithm) << ',' << r.repetition << ',' << r.seed << ',' << num(r.hit_ratio_final) << ','
         << num(r.runtime_seconds) << ',' << num(r.wall_seconds) << ',' << num(r.provisioning_seconds) << ','
         << num(r.cpu_seconds) << ',' << r.peak_ram_bytes << ',' << r.ram_delta_bytes << ','
         << num(r.energy_joules_proxy) << ',';
      if (r.convergence_episode) os << *r.convergence_episode;
      os << ',' << r.episodes << ',' << r.total_steps << '\n';
    }
    summary_row(os, s, "mean", &Summary::mean);
    summary_row(os, s, "median", &Summary::median);
    summary_row(os, s, "stddev", &Summary::stddev);
  }
  return os.str();
}

std::string render_scatter_svg(const AggregateReport& report) {
  struct Axis {
    const char* label;
    double (*value)(const RunMetrics&);
  };
  const Axis axes[] = {
      {"runtime (s)", [](const RunMetrics& r) { return r.runtime_seconds; }},
      {"peak RAM (MiB)", [](const RunMetrics& r) { return static_cast<double>(r.peak_ram_bytes) / (1024.0 * 1024.0); }},
      {"energy proxy (J)", [](const RunMetrics& r) { return r.energy_joules_proxy; }},
  };
  constexpr double kPanelW = 300, kPanelH = 240, kMargin = 50, kLegendH = 30;
  const double width = 3 * (kPanelW + kMargin) + kMargin;
  const double height = kPanelH + 2 * kMargin + kLegendH;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < 3; ++p) {
    const Axis& axis = axes[p];
    double max_x = 0.0;
    for (const RunMetrics& r : report.runs) max_x = std::max(max_x, axis.value(r));
    if (!(max_x > 0.0)) max_x = 1.0;
    const double x0 = kMargin + static_cast<double>(p) * (kPanelW + kMargin);
    const double y0 = kMargin;
    os << "<g>\n<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << kPanelW << "\" height=\"" << kPanelH
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << x0 + kPanelW / 2 << "\" y=\"" << y0 + kPanelH + 32
       << "\" text-anchor=\"middle\">" << axis.label << "</text>\n";
    os << "<text x=\"" << x0 - 36 << "\" y=\"" << y0 + kPanelH / 2 << "\" transform=\"rotate(-90 " << x0 - 36 << ' '
       << y0 + kPanelH / 2 << ")\" text-anchor=\"middle\">hit ratio</text>\n";
    for (double t : {0.0, 0.5, 1.0}) {
      os << "<text x=\"" << x0 - 4 << "\" y=\"" << y0 + kPanelH * (1 - t) + 4 << "\" text-anchor=\"end\">" << t
         << "</text>\n";
      os << "<text x=\"" << x0 + kPanelW * t << "\" y=\"" << y0 + kPanelH + 14 << "\" text-anchor=\"middle\">"
         << short_num(max_x * t) << "</text>\n";
    }
    for (const RunMetrics& r : report.runs) {
      const double cx = x0 + kPanelW * axis.value(r) / max_x;
      const double cy = y0 + kPanelH * (1.0 - r.hit_ratio_final);
      os << "<circle cx=\"" << short_num(cx) << "\" cy=\"" << short_num(cy) << "\" r=\"3\" fill=\""
         << colour(r.algorithm) << "\" fill-opacity=\"0.7\"/>\n";
    }
    os << "</g>\n";
  }

  double lx = kMargin;
  const double ly = height - kLegendH / 2;
  for (const AlgorithmSummary& s : report.summaries) {
    os << "<circle cx=\"" << lx << "\" cy=\"" << ly - 4 << "\" r=\"5\" fill=\"" << colour(s.algorithm) << "\"/>\n";
    os << "<text x=\"" << lx + 10 << "\" y=\"" << ly << "\">" << to_string(s.algorithm) << "</text>\n";
    lx += 90;
  }
  os << "</svg>\n";
  return os.str();
}

void export_csv(const AggregateReport& report, const std::filesystem::path& path) {
  write_text(to_csv(report), path);
  std::filesystem::path svg = path;
  svg.replace_extension(".svg");
  write_text(render_scatter_svg(report), svg);
}

json report_to_json(const AggregateReport& report) {
  const auto summary_json = [](const Summary& s) {
    return json{{"mean", s.mean}, {"median", s.median}, {"stddev", s.stddev}};
  };
  json algorithms = json::array();
  for (const AlgorithmSummary& s : report.summaries) {
    algorithms.push_back(json{{"algorithm", std::string(to_string(s.algorithm))},
                              {"repetitions", s.repetitions},
                              {"converged", s.converged},
                              {"hit_ratio", summary_json(s.hit_ratio)},
                              {"runtime_s", summary_json(s.runtime_seconds)},
                              {"cpu_s", summary_json(s.cpu_seconds)},
                              {"peak_ram_bytes", summary_json(s.peak_ram_bytes)},
                              {"energy_j", summary_json(s.energy_joules)},
                              {"total_steps", summary_json(s.total_steps)}});
  }
  json runs = json::array();
  for (const RunMetrics& r : report.runs) {
    runs.push_back(json{{"algorithm", std::string(to_string(r.algorithm))},
                        {"repetition", r.repetition},
                        {"seed", r.seed},
                        {"hit_ratio", r.hit_ratio_final},
                        {"runtime_s", r.runtime_seconds},
                        {"wall_s", r.wall_seconds},
                        {"provisioning_s", r.provisioning_seconds},
                        {"cpu_s", r.cpu_seconds},
                        {"peak_ram_bytes", r.peak_ram_bytes},
                        {"ram_delta_bytes", r.ram_delta_bytes},
                        {"energy_j", r.energy_joules_proxy},
                        {"convergence_episode", r.convergence_episode ? json(*r.convergence_episode) : json(nullptr)},
                        {"episodes", r.episodes},
                        {"total_steps", r.total_steps},
                        {"hit_ratio_series", r.hit_ratio_series}});
  }
  return json{{"repetitions", report.repetitions},
              {"base_seed", report.base_seed},
              {"ram_measured", report.ram_measured},
              {"energy_note", "energy_j is cpu seconds times a fixed per-core wattage, not a measurement"},
              {"algorithms", std::move(algorithms)},
              {"runs", std::move(runs)}};
}

} // namespace edgesched::harness
