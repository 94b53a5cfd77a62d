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

#ifndef CES_PIPELINE_H_
#define CES_PIPELINE_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ces/bubbles.h"
#include "ces/cone_solver.h"
#include "ces/geometry.h"
#include "ces/path.h"
#include "ces/speed.h"
#include "ces/stretch.h"

namespace ces {

struct CesConfig {
  BubbleParams bubbles;
  VehicleParams vehicle;
  SolverSettings solver;
  int max_iterations = 10;
  std::optional<double> timeout_s;
  // Minimum relative traversal-time decrease for accepting an iteration.
  double time_tolerance = 1e-3;
  // Skip speed optimization and drive at a fixed speed.
  bool constant_speed_mode = false;
  double constant_speed = 5.0;
  BoundarySpeeds boundary;
  // Optimize speed on the reference before the first stretch. When false,
  // the first stretch sees a vehicle at rest.
  bool speed_first = true;
};

absl::Status ValidateCesConfig(const CesConfig& config);

struct PhaseTimes {
  double bubbles_s = 0.0;
  double stretch_s = 0.0;
  double speed_s = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  double band_length = 0.0;
  double stretch_objective = 0.0;
  // NaN when the iteration did not produce a profile.
  double traversal_time = 0.0;
  double length = 0.0;
  bool accepted = false;
  bool stretch_relaxed = false;
  PhaseTimes times;
  std::string note;
};

// One piece of the continuous trajectory between consecutive waypoints.
struct ArcSegment {
  enum class Kind { kLine, kArc };
  Kind kind = Kind::kLine;
  Point2 start = Point2::Zero();
  Point2 end = Point2::Zero();
  Point2 center = Point2::Zero();
  // Distances from the center to start and end; they coincide for arcs
  // symmetric about the chord and are blended linearly in between.
  double start_radius = 0.0;
  double end_radius = 0.0;
  // Signed angle swept around the center, counterclockwise positive.
  double sweep = 0.0;
  double start_heading = 0.0;
  double end_heading = 0.0;

  // t in [0, 1].
  Point2 PointAt(double t) const;
  double Length() const;
};

inline constexpr double kMaxArcRadius = 1e6;

// Arcs centered where the normals of consecutive velocities meet; straight
// lines for (nearly) parallel velocities or radii above kMaxArcRadius.
std::vector<ArcSegment> ReconstructTrajectory(
    const std::vector<Point2>& waypoints, const std::vector<Point2>& velocity);

// Samples every segment (50 points per arc) and describes each collision.
std::vector<std::string> CheckSegments(const std::vector<ArcSegment>& segments,
                                       const Workspace& w,
                                       int samples_per_arc = 50);

// Traversal time along chords with speed linear on each segment.
absl::StatusOr<double> TrajectoryTime(const std::vector<Point2>& waypoints,
                                      const SpeedProfile& profile);

struct CesResult {
  std::vector<Point2> reference;
  std::vector<Point2> waypoints;
  std::optional<SpeedProfile> profile;
  // Stretch problem that produced `waypoints`; empty if no iteration was
  // accepted and the reference is returned.
  std::optional<StretchInput> final_stretch;
  BubbleSequence final_bubbles;
  std::vector<IterationRecord> history;
  std::vector<ArcSegment> segments;
  std::vector<std::string> warnings;
  // NaN when the speed program on the reference fails.
  double initial_time = 0.0;
  double final_time = 0.0;
  double initial_length = 0.0;
  double final_length = 0.0;
  // Reference curvature stays within 1 / r_min.
  bool reference_feasible = false;
  int accepted_iterations = 0;
  double wall_time_s = 0.0;

  // Percentages; NaN when the initial time is undefined.
  double TimeReductionPercent() const;
  double LengthReductionPercent() const;
};

// FailedPrecondition when start or goal collides. Otherwise never fails once
// inputs validate: subproblem failures end the loop and are recorded in the
// history, and the best trajectory so far is returned.
absl::StatusOr<CesResult> RunCes(const std::vector<Point2>& reference,
                                 const Workspace& w, const CesConfig& config);

struct TrajectoryAudit {
  bool stretched = false;
  double ball_violation = 0.0;
  double balance_violation = 0.0;
  double friction_ratio = 0.0;
  double traction_ratio = 0.0;
  double max_curvature = 0.0;
  bool ok = false;
};

// Independent re-check of the final trajectory against the stretch problem
// that produced it and against the vehicle limits.
TrajectoryAudit AuditResult(const CesResult& result, const CesConfig& config,
                            double tolerance = 1e-6);

}  // namespace ces

#endif  // CES_PIPELINE_H_
