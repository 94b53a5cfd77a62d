// Copyright 2026 The CES Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ces/report.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "nlohmann/json.hpp"

namespace ces {
namespace {

using Json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSvgWidth = 800.0;
constexpr double kSvgMargin = 10.0;

Json Number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double ReadNumber(const Json& j) {
  return j.is_number() ? j.get<double>() : kNaN;
}

Json WorkspaceJson(const Workspace& w) {
  Json obstacles = Json::array();
  for (const Polygon& p : w.obstacles()) {
    Json poly = Json::array();
    for (const Point2& v : p.vertices()) poly.push_back({v.x(), v.y()});
    obstacles.push_back(poly);
  }
  return {{"bounds",
           {w.bounds().min.x(), w.bounds().min.y(), w.bounds().max.x(),
            w.bounds().max.y()}},
          {"obstacles", obstacles}};
}

Json ReportObject(const RunReport& r, bool include_timing) {
  Json history = Json::array();
  Json per_iteration = Json::array();
  for (const IterationRecord& h : r.history) {
    history.push_back({{"iteration", h.iteration},
                       {"band_length_m", Number(h.band_length)},
                       {"stretch_objective", Number(h.stretch_objective)},
                       {"traversal_time_s", Number(h.traversal_time)},
                       {"length_m", Number(h.length)},
                       {"accepted", h.accepted},
                       {"stretch_relaxed", h.stretch_relaxed},
                       {"note", h.note}});
    per_iteration.push_back({{"bubbles_s", h.times.bubbles_s},
                             {"stretch_s", h.times.stretch_s},
                             {"speed_s", h.times.speed_s}});
  }
  Json out = {
      {"scenario", r.scenario_id},
      {"generator", r.generator},
      {"seed", r.seed},
      {"status", std::string(ToString(r.status))},
      {"waypoints", r.waypoints},
      {"metrics",
       {{"initial_time_s", Number(r.initial_time)},
        {"final_time_s", Number(r.final_time)},
        {"time_reduction_pct", Number(r.time_reduction_pct)},
        {"initial_length_m", Number(r.initial_length)},
        {"final_length_m", Number(r.final_length)},
        {"length_reduction_pct", Number(r.length_reduction_pct)},
        {"reference_feasible", r.reference_feasible}}},
      {"iterations", {{"run", r.iterations}, {"accepted", r.accepted_iterations}}},
      {"audit",
       {{"ok", r.audit.ok},
        {"stretched", r.audit.stretched},
        {"ball_violation_m", Number(r.audit.ball_violation)},
        {"balance_violation", Number(r.audit.balance_violation)},
        {"friction_ratio", Number(r.audit.friction_ratio)},
        {"traction_ratio", Number(r.audit.traction_ratio)},
        {"max_curvature", Number(r.audit.max_curvature)}}},
      {"history", history},
      {"warnings", r.warnings},
  };
  if (!r.error.empty()) out["error"] = r.error;
  if (include_timing) {
    out["timing"] = {{"bubbles_s", r.phase_totals.bubbles_s},
                     {"stretch_s", r.phase_totals.stretch_s},
                     {"speed_s", r.phase_totals.speed_s},
                     {"wall_s", r.wall_time_s},
                     {"per_iteration", per_iteration}};
  }
  return out;
}

absl::Status WriteFile(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    return absl::UnavailableError(
        absl::StrFormat("cannot write %s", path.string()));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("missing %s", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Rows of a CSV file with a header; every row has the header's width.
absl::StatusOr<std::vector<std::vector<double>>> ReadCsv(
    const std::filesystem::path& path, int columns) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  std::vector<std::vector<double>> rows;
  bool header = true;
  for (absl::string_view line : absl::StrSplit(*text, '\n', absl::SkipEmpty())) {
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    for (absl::string_view cell : absl::StrSplit(line, ',')) {
      row.push_back(std::strtod(std::string(cell).c_str(), nullptr));
    }
    if (static_cast<int>(row.size()) != columns) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s: expected %d columns", path.string(), columns));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Blue at slow, red at fast.
std::string SpeedColor(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255.0 * t));
  const int g = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(2.0 * t - 1.0)) * 0.8));
  const int b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
  return absl::StrFormat("#%02x%02x%02x", r, g, b);
}

}  // namespace

std::string_view ToString(RunStatus status) {
  switch (status) {
    case RunStatus::kOk:
      return "ok";
    case RunStatus::kInfeasible:
      return "infeasible";
    case RunStatus::kError:
      return "error";
  }
  return "unknown";
}

RunReport MakeRunReport(const GeneratedScenario& scenario,
                        const CesResult& result, const CesConfig& config) {
  RunReport r;
  r.scenario_id = scenario.id;
  r.generator = scenario.generator;
  r.seed = scenario.seed;
  r.waypoints = static_cast<int>(result.waypoints.size());
  r.initial_time = result.initial_time;
  r.final_time = result.final_time;
  r.time_reduction_pct = result.TimeReductionPercent();
  r.initial_length = result.initial_length;
  r.final_length = result.final_length;
  r.length_reduction_pct = result.LengthReductionPercent();
  r.reference_feasible = result.reference_feasible;
  r.iterations = static_cast<int>(result.history.size()) - 1;
  r.accepted_iterations = result.accepted_iterations;
  r.audit = AuditResult(result, config);
  r.history = result.history;
  r.warnings = result.warnings;
  for (const IterationRecord& h : result.history) {
    r.phase_totals.bubbles_s += h.times.bubbles_s;
    r.phase_totals.stretch_s += h.times.stretch_s;
    r.phase_totals.speed_s += h.times.speed_s;
  }
  r.wall_time_s = result.wall_time_s;
  if (!result.profile.has_value()) {
    r.status = RunStatus::kInfeasible;
    r.error = "no dynamically feasible speed profile was found";
  } else if (!r.audit.ok) {
    r.status = RunStatus::kInfeasible;
    r.error = "final trajectory fails the constraint audit";
  }
  return r;
}

RunReport MakeFailureReport(const std::string& scenario_id, uint64_t seed,
                            RunStatus status, const std::string& error) {
  RunReport r;
  r.scenario_id = scenario_id;
  r.seed = seed;
  r.status = status;
  r.error = error;
  r.initial_time = r.final_time = r.time_reduction_pct = kNaN;
  r.initial_length = r.final_length = r.length_reduction_pct = kNaN;
  return r;
}

std::string RunReportJson(const RunReport& report, const Workspace* workspace,
                          bool include_timing) {
  Json doc = ReportObject(report, include_timing);
  if (workspace != nullptr) doc["workspace"] = WorkspaceJson(*workspace);
  return doc.dump(2) + "\n";
}

std::string BenchJson(std::vector<RunReport> reports, bool include_timing) {
  std::sort(reports.begin(), reports.end(),
            [](const RunReport& a, const RunReport& b) {
              return a.scenario_id < b.scenario_id;
            });
  Json entries = Json::array();
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  int counted = 0;
  int failures = 0;
  PhaseTimes phases;
  for (const RunReport& r : reports) {
    entries.push_back(ReportObject(r, include_timing));
    if (r.status != RunStatus::kOk) ++failures;
    if (std::isfinite(r.time_reduction_pct) && r.status == RunStatus::kOk) {
      sum += r.time_reduction_pct;
      lo = std::min(lo, r.time_reduction_pct);
      hi = std::max(hi, r.time_reduction_pct);
      ++counted;
    }
    phases.bubbles_s += r.phase_totals.bubbles_s;
    phases.stretch_s += r.phase_totals.stretch_s;
    phases.speed_s += r.phase_totals.speed_s;
  }
  Json summary = {{"count", reports.size()},
                  {"failures", failures},
                  {"mean_time_reduction_pct", counted ? Number(sum / counted) : Json(nullptr)},
                  {"min_time_reduction_pct", counted ? Number(lo) : Json(nullptr)},
                  {"max_time_reduction_pct", counted ? Number(hi) : Json(nullptr)}};
  if (include_timing && !reports.empty()) {
    const double n = static_cast<double>(reports.size());
    summary["mean_phase_s"] = {{"bubbles", phases.bubbles_s / n},
                               {"stretch", phases.stretch_s / n},
                               {"speed", phases.speed_s / n}};
  }
  return Json({{"summary", summary}, {"runs", entries}}).dump(2) + "\n";
}

absl::Status WriteRunArtifacts(const std::string& dir,
                               const GeneratedScenario& scenario,
                               const CesResult& result,
                               const RunReport& report) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrFormat("cannot create %s: %s", dir, ec.message()));
  }
  const fs::path root(dir);
  std::ostringstream traj;
  traj << "k,x,y,ref_x,ref_y\n" << std::setprecision(17);
  for (size_t k = 0; k < result.waypoints.size(); ++k) {
    traj << k << ',' << result.waypoints[k].x() << ',' << result.waypoints[k].y()
         << ',' << result.reference[k].x() << ',' << result.reference[k].y()
         << '\n';
  }
  if (absl::Status s = WriteFile(root / "trajectory.csv", traj.str()); !s.ok()) {
    return s;
  }
  std::ostringstream speed;
  if (result.profile.has_value()) {
    absl::StatusOr<PathGeometry> geom = ComputePathGeometry(result.waypoints);
    if (geom.ok()) WriteSpeedCsv(*geom, *result.profile, speed);
  }
  if (speed.str().empty()) speed << "k,s,speed,u_long,u_lat\n";
  if (absl::Status s = WriteFile(root / "speed.csv", speed.str()); !s.ok()) {
    return s;
  }
  std::ostringstream bubbles;
  WriteBubblesCsv(result.final_bubbles, bubbles);
  if (absl::Status s = WriteFile(root / "bubbles.csv", bubbles.str()); !s.ok()) {
    return s;
  }
  if (absl::Status s = WriteFile(root / "report.json",
                                 RunReportJson(report, &scenario.workspace));
      !s.ok()) {
    return s;
  }
  std::vector<std::string> warnings;
  absl::StatusOr<PlotData> plot = LoadPlotData(dir, &warnings);
  if (!plot.ok()) return plot.status();
  return WriteFile(root / "plot.svg", RenderSvg(*plot));
}

absl::StatusOr<PlotData> LoadPlotData(const std::string& dir,
                                      std::vector<std::string>* warnings) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  absl::StatusOr<std::string> report = ReadFile(root / "report.json");
  if (!report.ok()) return report.status();
  PlotData data;
  try {
    const Json doc = Json::parse(*report);
    const Json& ws = doc.at("workspace");
    const Json& b = ws.at("bounds");
    data.bounds = AlignedBox{Point2(b[0].get<double>(), b[1].get<double>()),
                             Point2(b[2].get<double>(), b[3].get<double>())};
    for (const Json& poly : ws.at("obstacles")) {
      std::vector<Point2> pts;
      for (const Json& p : poly) {
        pts.push_back(Point2(p[0].get<double>(), p[1].get<double>()));
      }
      data.obstacles.push_back(std::move(pts));
    }
  } catch (const std::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("report.json: %s", e.what()));
  }
  absl::StatusOr<std::vector<std::vector<double>>> traj =
      ReadCsv(root / "trajectory.csv", 5);
  if (!traj.ok()) return traj.status();
  for (const std::vector<double>& row : *traj) {
    data.trajectory.push_back(Point2(row[1], row[2]));
    data.reference.push_back(Point2(row[3], row[4]));
  }
  absl::StatusOr<std::vector<std::vector<double>>> bubbles =
      ReadCsv(root / "bubbles.csv", 4);
  if (bubbles.ok()) {
    for (const std::vector<double>& row : *bubbles) {
      data.bubbles.push_back(Bubble{Point2(row[1], row[2]), row[3]});
    }
  } else if (warnings != nullptr) {
    warnings->push_back(std::string(bubbles.status().message()));
  }
  absl::StatusOr<std::vector<std::vector<double>>> speed =
      ReadCsv(root / "speed.csv", 5);
  if (speed.ok() && speed->size() == data.trajectory.size()) {
    for (const std::vector<double>& row : *speed) data.speed.push_back(row[2]);
  } else if (warnings != nullptr) {
    warnings->push_back(speed.ok()
                            ? "speed.csv does not match the trajectory; "
                              "drawing without speed colors"
                            : std::string(speed.status().message()) +
                                  "; drawing without speed colors");
  }
  return data;
}

std::string RenderSvg(const PlotData& data) {
  const Point2 size = data.bounds.max - data.bounds.min;
  const double scale = (kSvgWidth - 2.0 * kSvgMargin) / std::max(size.x(), 1e-9);
  const double height = size.y() * scale + 2.0 * kSvgMargin;
  const auto px = [&](const Point2& p) {
    return absl::StrFormat(
        "%.3f,%.3f", kSvgMargin + (p.x() - data.bounds.min.x()) * scale,
        kSvgMargin + (data.bounds.max.y() - p.y()) * scale);
  };
  std::string svg = absl::StrFormat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
      "height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
      kSvgWidth, height, kSvgWidth, height);
  absl::StrAppendFormat(
      &svg,
      "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" "
      "fill=\"white\" stroke=\"black\"/>\n",
      kSvgMargin, kSvgMargin, size.x() * scale, size.y() * scale);
  for (const std::vector<Point2>& poly : data.obstacles) {
    svg += "<polygon fill=\"#777777\" points=\"";
    for (size_t i = 0; i < poly.size(); ++i) {
      svg += (i ? " " : "") + px(poly[i]);
    }
    svg += "\"/>\n";
  }
  for (const Bubble& b : data.bubbles) {
    const std::string c = px(b.center);
    const size_t comma = c.find(',');
    absl::StrAppendFormat(&svg,
                          "<circle cx=\"%s\" cy=\"%s\" r=\"%.3f\" fill=\"none\" "
                          "stroke=\"#55aa88\" stroke-width=\"0.5\"/>\n",
                          c.substr(0, comma), c.substr(comma + 1),
                          b.radius * scale);
  }
  if (!data.reference.empty()) {
    svg += "<polyline fill=\"none\" stroke=\"#444444\" stroke-dasharray=\"4 3\" "
           "stroke-width=\"1\" points=\"";
    for (size_t i = 0; i < data.reference.size(); ++i) {
      svg += (i ? " " : "") + px(data.reference[i]);
    }
    svg += "\"/>\n";
  }
  if (data.speed.size() == data.trajectory.size() && !data.speed.empty()) {
    const auto [lo, hi] = std::minmax_element(data.speed.begin(), data.speed.end());
    const double span = std::max(*hi - *lo, 1e-9);
    for (size_t k = 0; k + 1 < data.trajectory.size(); ++k) {
      const double v = 0.5 * (data.speed[k] + data.speed[k + 1]);
      const std::string a = px(data.trajectory[k]);
      const std::string b = px(data.trajectory[k + 1]);
      absl::StrAppendFormat(
          &svg,
          "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"%s\" "
          "stroke-width=\"2\"/>\n",
          a.substr(0, a.find(',')), a.substr(a.find(',') + 1),
          b.substr(0, b.find(',')), b.substr(b.find(',') + 1),
          SpeedColor((v - *lo) / span));
    }
    absl::StrAppendFormat(
        &svg,
        "<text x=\"%.3f\" y=\"%.3f\" font-size=\"12\" font-family=\"sans-serif\">"
        "speed %.2f (blue) to %.2f m/s (red)</text>\n",
        kSvgMargin + 4.0, kSvgMargin + 14.0, *lo, *hi);
  } else if (!data.trajectory.empty()) {
    svg += "<polyline fill=\"none\" stroke=\"#cc2222\" stroke-width=\"2\" "
           "points=\"";
    for (size_t i = 0; i < data.trajectory.size(); ++i) {
      svg += (i ? " " : "") + px(data.trajectory[i]);
    }
    svg += "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace ces
