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

#ifndef CES_SCENARIOS_H_
#define CES_SCENARIOS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "ces/geometry.h"
#include "ces/pipeline.h"

namespace ces {

// Exact area of a union of axis-aligned boxes.
double UnionArea(const std::vector<AlignedBox>& boxes);

struct MazeSpec {
  AlignedBox bounds{Point2(0.0, 0.0), Point2(100.0, 100.0)};
  // Fraction of the bounds covered by the union of the obstacles.
  double coverage = 0.5;
  // Accepted relative deviation from the coverage target.
  double coverage_tolerance = 0.05;
  double min_side = 2.0;
  double max_side = 15.0;
  Point2 start = Point2(2.5, 2.5);
  Point2 goal = Point2(97.5, 97.5);
  // No obstacle comes closer than this to start or goal.
  double endpoint_clearance = 2.0;
  // Inflation of the reachability check; values below half the grid cell
  // diagonal are raised to it.
  double path_clearance = 0.0;
  int max_reseeds = 50;
};

absl::Status ValidateMazeSpec(const MazeSpec& spec);

struct MazeStats {
  uint64_t seed_used = 0;
  int reseeds = 0;
  double coverage = 0.0;
};

// Random rectangles added until the coverage band is hit; reseeds until the
// goal is reachable on the planner grid.
absl::StatusOr<Workspace> GenerateMaze(const MazeSpec& spec, uint64_t seed,
                                       MazeStats* stats = nullptr);

struct GridPlannerOptions {
  double cell = 0.5;
  // Obstacle inflation; half the cell diagonal keeps diagonal moves clear.
  double inflation = 0.25 * 1.4142135623730951;
  // Larger inflations tried first, in order; the first one that still
  // connects start and goal is used and also sets the shortcut clearance.
  std::vector<double> clearance_levels;
  // Replace the cell staircase by visible shortcuts.
  bool shortcut = true;
  // Minimum sampled clearance along a shortcut.
  double shortcut_clearance = 0.3;
  // Largest corner fillet radius; 0 keeps sharp corners. Radii shrink
  // where the full radius does not fit.
  double fillet_radius = 0.0;
  // Corners are moved outward by up to max_corner_shift until a fillet of
  // this radius fits.
  double fillet_min_radius = 0.0;
  double max_corner_shift = 0.0;
  double fillet_clearance = 0.1;
  double spacing = 0.5;
  // When positive, resample to exactly this many waypoints instead.
  int num_points = 0;
};

struct PlannerStats {
  int expanded = 0;
  double grid_path_length = 0.0;
  int corners = 0;
  // Fillets below fillet_min_radius.
  int tight_corners = 0;
  // Inflation of the grid search that succeeded.
  double clearance = 0.0;
};

// NotFound when no grid path exists.
absl::StatusOr<std::vector<Point2>> ReferenceFromGrid(
    const Workspace& w, const Point2& start, const Point2& goal,
    const GridPlannerOptions& options, PlannerStats* stats = nullptr);

// Arc-length resampling with equal spacing.
std::vector<Point2> ResampleToCount(const std::vector<Point2>& polyline,
                                    int count);
std::vector<Point2> ResampleToSpacing(const std::vector<Point2>& polyline,
                                      double spacing);

// Midpoints of the widest free vertical interval at stations x0, x0 + h, ...
// up to x1. Each station also sees obstacles within one station of it.
absl::StatusOr<std::vector<Point2>> CorridorCenterline(const Workspace& w,
                                                       double x0, double x1,
                                                       double station_spacing);

struct LaneSpec {
  double length = 50.0;
  double width = 6.0;
  // Obstacles in lane coordinates: x along the lane, y across from the right
  // edge.
  std::vector<AlignedBox> obstacles;
  double station_spacing = 0.5;
  double spacing = 0.5;
  // Distance of the first and last station from the lane ends.
  double end_margin = 1.0;
};

// Two staggered obstacles, the first on the right half, the second on the
// left half.
LaneSpec DefaultLaneChange();

struct GeneratedScenario {
  std::string id;
  Workspace workspace;
  std::vector<Point2> reference;
  CesConfig config;
  std::string generator;
  uint64_t seed = 0;
  PlannerStats planner;
};

absl::StatusOr<GeneratedScenario> MazeScenario(const MazeSpec& spec,
                                               uint64_t seed,
                                               int num_points = 257);
absl::StatusOr<GeneratedScenario> LaneChangeScenario(const LaneSpec& spec);
GeneratedScenario MooseTestScenario();

// Scenario files. Parse errors carry the byte offset.
absl::StatusOr<GeneratedScenario> ParseScenario(std::string_view text,
                                                std::string id);
absl::StatusOr<GeneratedScenario> LoadScenario(const std::string& path);
std::string ScenarioToJson(const GeneratedScenario& scenario);

}  // namespace ces

#endif  // CES_SCENARIOS_H_
