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

#ifndef CES_STRETCH_H_
#define CES_STRETCH_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ces/bubbles.h"
#include "ces/cone_solver.h"
#include "ces/geometry.h"
#include "ces/path.h"

namespace ces {

// Below this speed the friction term of the balance bound is dropped and
// headings fall back to path tangents.
inline constexpr double kRestSpeed = 1e-3;

// Lateral acceleration budget left after spending u_long of the friction
// circle: sqrt((mu g)^2 - (u_long / m)^2).
absl::StatusOr<double> Alpha(double u_long, const VehicleParams& vehicle);

// Upper bound on |2 Q_k - Q_k-1 - Q_k+1|:
// min(d^2 / r_min, alpha (d / |v|)^2), the second term only when |v| is
// at least kRestSpeed.
absl::StatusOr<double> BalanceBound(double band_length, const Point2& velocity,
                                    double u_long,
                                    const VehicleParams& vehicle);

struct StretchInput {
  std::vector<Point2> path;
  BubbleSequence bubbles;
  std::vector<Point2> velocity;
  std::vector<double> u_long;
  VehicleParams vehicle;
  double band_length = 0.0;
};

// Waypoints 0, 1, n-2 and n-1 are fixed (endpoints and heading anchors);
// the rest are offsets from their bubble centers.
struct StretchProgram {
  ConeProgram program;
  std::vector<Point2> fixed;  // Anchor positions, NaN for variables.
  std::vector<double> bound;  // Balance bound per waypoint (0 at the ends).
  int first_var = 2;
  int last_var = 0;

  bool IsVariable(int k) const { return k >= first_var && k <= last_var; }
  // Recovers waypoints from a solver point.
  std::vector<Point2> Waypoints(const Eigen::VectorXd& x,
                                const BubbleSequence& bubbles) const;
};

// Sum over interior waypoints of |2 Q_k - Q_k-1 - Q_k+1|^2.
double BalanceObjective(const std::vector<Point2>& path);

// Heading anchors Q_1 and Q_n-2.
std::pair<Point2, Point2> HeadingAnchors(const StretchInput& input);

// `bound_scale` multiplies every balance bound; `margin` tightens ball and
// balance bounds relative to their scale. Anchors that violate their own
// constraints fail with FailedPrecondition naming the constraint.
absl::StatusOr<StretchProgram> BuildStretchProgram(const StretchInput& input,
                                                   double bound_scale = 1.0,
                                                   double margin = 0.0);

struct StretchOutput {
  std::vector<Point2> waypoints;
  double objective = 0.0;
  std::vector<double> balance_norm;
  std::vector<double> balance_bound;
  SolveStatus status = SolveStatus::kOptimal;
  int iterations = 0;
  // Balance bounds were widened to recover feasibility.
  bool relaxed = false;
  // No feasible program was found; waypoints are the input path.
  bool unchanged = false;
  std::vector<std::string> warnings;
};

// Single solve; infeasibility is a FailedPrecondition error that lists the
// most violated constraints.
absl::StatusOr<StretchOutput> SolveStretch(const StretchInput& input,
                                           const SolverSettings& settings,
                                           double bound_scale = 1.0);

// SolveStretch with fallbacks: widen balance bounds by 1.5, then return the
// input path unchanged. Only malformed inputs produce an error.
absl::StatusOr<StretchOutput> Stretch(const StretchInput& input,
                                      const SolverSettings& settings);

struct StretchAudit {
  // max(|Q_k - c_k| - r_k) over constrained waypoints.
  double ball_violation = 0.0;
  // max(|N_k| - bound_k) over interior waypoints.
  double balance_violation = 0.0;
  double anchor_error = 0.0;
  bool ok = false;
};

// Independent re-check of the output; `bound_scale` as used for the solve.
StretchAudit AuditStretch(const StretchInput& input,
                          const std::vector<Point2>& waypoints,
                          double tolerance = 1e-6, double bound_scale = 1.0);

// CSV with columns k,x,y,balance_norm,bound.
void WriteStretchCsv(const StretchOutput& output, std::ostream& out);

}  // namespace ces

#endif  // CES_STRETCH_H_
