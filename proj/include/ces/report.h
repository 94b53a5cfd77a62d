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

#ifndef CES_REPORT_H_
#define CES_REPORT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ces/bubbles.h"
#include "ces/geometry.h"
#include "ces/pipeline.h"
#include "ces/scenarios.h"

namespace ces {

enum class RunStatus { kOk, kInfeasible, kError };

std::string_view ToString(RunStatus status);

struct RunReport {
  std::string scenario_id;
  std::string generator;
  uint64_t seed = 0;
  RunStatus status = RunStatus::kOk;
  std::string error;
  int waypoints = 0;
  // NaN when undefined.
  double initial_time = 0.0;
  double final_time = 0.0;
  double time_reduction_pct = 0.0;
  double initial_length = 0.0;
  double final_length = 0.0;
  double length_reduction_pct = 0.0;
  bool reference_feasible = false;
  int iterations = 0;
  int accepted_iterations = 0;
  TrajectoryAudit audit;
  std::vector<IterationRecord> history;
  std::vector<std::string> warnings;
  PhaseTimes phase_totals;
  double wall_time_s = 0.0;
};

// A run succeeds when it produced a speed profile and the audit holds.
RunReport MakeRunReport(const GeneratedScenario& scenario,
                        const CesResult& result, const CesConfig& config);
RunReport MakeFailureReport(const std::string& scenario_id, uint64_t seed,
                            RunStatus status, const std::string& error);

// Wall-clock values go under "timing"; without them the document depends
// only on the inputs.
std::string RunReportJson(const RunReport& report,
                          const Workspace* workspace = nullptr,
                          bool include_timing = true);

// Aggregate over runs sorted by scenario id.
std::string BenchJson(std::vector<RunReport> reports, bool include_timing);

// trajectory.csv, speed.csv, bubbles.csv, report.json and plot.svg.
absl::Status WriteRunArtifacts(const std::string& dir,
                               const GeneratedScenario& scenario,
                               const CesResult& result,
                               const RunReport& report);

struct PlotData {
  AlignedBox bounds;
  std::vector<std::vector<Point2>> obstacles;
  std::vector<Point2> reference;
  std::vector<Point2> trajectory;
  std::vector<Bubble> bubbles;
  // One speed per trajectory waypoint; empty draws a plain path.
  std::vector<double> speed;
};

// Reads the artifacts of a run directory. report.json and trajectory.csv
// are required; missing optional files add warnings.
absl::StatusOr<PlotData> LoadPlotData(const std::string& dir,
                                      std::vector<std::string>* warnings);

std::string RenderSvg(const PlotData& data);

}  // namespace ces

#endif  // CES_REPORT_H_
