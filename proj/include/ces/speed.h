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

#ifndef CES_SPEED_H_
#define CES_SPEED_H_

#include <ostream>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "ces/cone_solver.h"
#include "ces/geometry.h"
#include "ces/path.h"

namespace ces {

// Discrete differential geometry of a waypoint sequence.
struct PathGeometry {
  std::vector<Point2> points;
  // Segment lengths, size n-1.
  std::vector<double> ds;
  // Cumulative arc length, s[0] = 0.
  std::vector<double> s;
  std::vector<Point2> tangents;
  // Signed Menger curvature, zero at both endpoints.
  std::vector<double> curvature;

  int size() const { return static_cast<int>(points.size()); }
  double MaxAbsCurvature() const;
};

absl::StatusOr<PathGeometry> ComputePathGeometry(
    const std::vector<Point2>& waypoints);

struct BoundarySpeeds {
  double start = 0.0;
  double end = 0.0;
};

// Variable layout of the minimum-time program: squared speeds b (n),
// segment accelerations a (n-1), speed bounds w (n), segment times c (n-1).
struct SpeedProgram {
  ConeProgram program;
  int n = 0;
  int b_offset = 0;
  int a_offset = 0;
  int w_offset = 0;
  int c_offset = 0;
};

// `margin` tightens the friction and traction limits by margin times their
// scale so that a solution within solver tolerance satisfies the untightened
// limits.
absl::StatusOr<SpeedProgram> BuildSpeedProgram(const PathGeometry& geom,
                                               const VehicleParams& vehicle,
                                               const BoundarySpeeds& boundary,
                                               double margin = 0.0);

struct SpeedProfile {
  // Squared speed per waypoint.
  std::vector<double> b;
  // Tangential acceleration per segment.
  std::vector<double> a;
  std::vector<Point2> velocity;
  std::vector<double> u_long;
  std::vector<double> u_lat;
  double traversal_time = 0.0;
  // Sum of the segment-time epigraph variables.
  double epigraph_time = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
  int iterations = 0;
  Eigen::VectorXd solver_x;
  Eigen::VectorXd solver_y;

  int size() const { return static_cast<int>(b.size()); }
  double Speed(int k) const;
};

// Minimum-time profile along fixed waypoints. Fails when the program is
// infeasible; other non-optimal solver outcomes are reported in `status`.
absl::StatusOr<SpeedProfile> OptimizeSpeed(
    const std::vector<Point2>& waypoints, const VehicleParams& vehicle,
    const BoundarySpeeds& boundary, const SolverSettings& settings,
    const SpeedProfile* warm_start = nullptr);

// Profile with the same speed everywhere and zero longitudinal force.
absl::StatusOr<SpeedProfile> ConstantSpeedProfile(
    const std::vector<Point2>& waypoints, const VehicleParams& vehicle,
    double speed);

// Sum over segments of 2 ds / (sqrt(b_k) + sqrt(b_k+1)), assuming speed
// varies linearly along each segment. Fails on a zero-speed segment of
// positive length.
absl::StatusOr<double> TraversalTime(const std::vector<double>& ds,
                                     const std::vector<double>& b);

struct SpeedAudit {
  // max |u| / (mu m g).
  double friction_ratio = 0.0;
  // max u_long / u_long_max.
  double traction_ratio = 0.0;
  double min_b = 0.0;
  // max |b_k+1 - b_k - 2 a_k ds_k| / (1 + |b_k+1| + |b_k|).
  double coupling_error = 0.0;
  double max_curvature_speed_excess = 0.0;
  bool ok = false;
};

// Recomputes forces from (b, a) and the geometry; does not consult the
// solver.
SpeedAudit AuditSpeedProfile(const PathGeometry& geom,
                             const SpeedProfile& profile,
                             const VehicleParams& vehicle,
                             double tolerance = 1e-6);

// CSV with columns k,s,speed,u_long,u_lat.
void WriteSpeedCsv(const PathGeometry& geom, const SpeedProfile& profile,
                   std::ostream& out);

}  // namespace ces

#endif  // CES_SPEED_H_
