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

#include "ces/stretch.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace ces {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Relative excess of |u_long| over the friction limit tolerated as solver
// round-off.
constexpr double kFrictionRoundOff = 1e-6;
constexpr double kRelaxFactor = 1.5;
constexpr int kMaxReportedConstraints = 8;

// x and y coordinates of one waypoint as affine expressions.
struct PointExpr {
  AffineExpr x;
  AffineExpr y;
};

AffineExpr Combine(std::initializer_list<std::pair<double, const AffineExpr*>> parts) {
  AffineExpr out;
  for (const auto& [w, e] : parts) {
    out.constant += w * e->constant;
    for (const auto& [i, c] : e->terms) {
      auto it = std::find_if(out.terms.begin(), out.terms.end(),
                             [i](const auto& t) { return t.first == i; });
      if (it == out.terms.end()) {
        out.terms.emplace_back(i, w * c);
      } else {
        it->second += w * c;
      }
    }
  }
  return out;
}

Point2 Heading(const Point2& velocity, const Point2& fallback) {
  if (velocity.norm() >= kRestSpeed) return velocity.normalized();
  return fallback.normalized();
}

absl::Status ValidateInput(const StretchInput& input) {
  const int n = static_cast<int>(input.path.size());
  if (n < 4) {
    return absl::InvalidArgumentError(
        absl::StrFormat("stretching needs at least 4 waypoints, got %d", n));
  }
  if (input.bubbles.size() != n - 2) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "expected %d bubbles, got %d", n - 2, input.bubbles.size()));
  }
  if (static_cast<int>(input.velocity.size()) != n ||
      static_cast<int>(input.u_long.size()) != n) {
    return absl::InvalidArgumentError(
        "velocity and force sequences must match the path length");
  }
  if (!(input.band_length > 0.0)) {
    return absl::InvalidArgumentError("band length must be positive");
  }
  return ValidateVehicleParams(input.vehicle);
}

}  // namespace

absl::StatusOr<double> Alpha(double u_long, const VehicleParams& vehicle) {
  const double mu_g = vehicle.mu * vehicle.g;
  const double along = std::abs(u_long) / vehicle.mass_kg;
  if (along > mu_g * (1.0 + kFrictionRoundOff) || std::isnan(u_long)) {
    return absl::OutOfRangeError(absl::StrFormat(
        "longitudinal force %g N exceeds the friction limit %g N", u_long,
        vehicle.FrictionLimit()));
  }
  return std::sqrt(std::max(mu_g * mu_g - along * along, 0.0));
}

absl::StatusOr<double> BalanceBound(double band_length, const Point2& velocity,
                                    double u_long,
                                    const VehicleParams& vehicle) {
  if (!(band_length > 0.0)) {
    return absl::InvalidArgumentError("band length must be positive");
  }
  const double d2 = band_length * band_length;
  double bound = d2 / vehicle.r_min_m;
  const double speed = velocity.norm();
  if (speed >= kRestSpeed) {
    absl::StatusOr<double> alpha = Alpha(u_long, vehicle);
    if (!alpha.ok()) return alpha.status();
    bound = std::min(bound, *alpha * d2 / (speed * speed));
  }
  return bound;
}

double BalanceObjective(const std::vector<Point2>& path) {
  double total = 0.0;
  for (size_t k = 1; k + 1 < path.size(); ++k) {
    total += (2.0 * path[k] - path[k - 1] - path[k + 1]).squaredNorm();
  }
  return total;
}

std::pair<Point2, Point2> HeadingAnchors(const StretchInput& input) {
  const int n = static_cast<int>(input.path.size());
  const Point2& first = input.path.front();
  const Point2& last = input.path.back();
  const Point2 h0 = Heading(input.velocity[0], input.path[1] - input.path[0]);
  const Point2 h1 =
      Heading(input.velocity[n - 2], input.path[n - 1] - input.path[n - 2]);
  return {first + input.band_length * h0, last - input.band_length * h1};
}

std::vector<Point2> StretchProgram::Waypoints(
    const Eigen::VectorXd& x, const BubbleSequence& bubbles) const {
  std::vector<Point2> out = fixed;
  for (int k = first_var; k <= last_var; ++k) {
    const int v = 2 * (k - first_var);
    out[k] = bubbles.at(k).center + Point2(x(v), x(v + 1));
  }
  return out;
}

absl::StatusOr<StretchProgram> BuildStretchProgram(const StretchInput& input,
                                                   double bound_scale,
                                                   double margin) {
  if (absl::Status s = ValidateInput(input); !s.ok()) return s;
  const int n = static_cast<int>(input.path.size());
  const int num_points = std::max(n - 4, 0);
  StretchProgram sp{ConeProgram(2 * num_points), {}, {}, 2, n - 3};
  sp.fixed.assign(n, Point2(kNaN, kNaN));
  const auto [anchor1, anchor2] = HeadingAnchors(input);
  sp.fixed[0] = input.path.front();
  sp.fixed[1] = anchor1;
  sp.fixed[n - 2] = anchor2;
  sp.fixed[n - 1] = input.path.back();

  // The second-to-last anchor has a ball constraint it cannot move to meet.
  const Bubble& last_ball = input.bubbles.at(n - 2);
  if ((anchor2 - last_ball.center).norm() > last_ball.radius) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "stretch infeasible: heading anchor %d lies %g m outside its bubble",
        n - 2, (anchor2 - last_ball.center).norm() - last_ball.radius));
  }

  std::vector<PointExpr> q(n);
  for (int k = 0; k < n; ++k) {
    if (sp.IsVariable(k)) {
      const int v = 2 * (k - sp.first_var);
      const Point2& c = input.bubbles.at(k).center;
      q[k] = {AffineExpr({{v, 1.0}}, c.x()), AffineExpr({{v + 1, 1.0}}, c.y())};
    } else {
      q[k] = {AffineExpr(sp.fixed[k].x()), AffineExpr(sp.fixed[k].y())};
    }
  }

  sp.bound.assign(n, 0.0);
  for (int k = 1; k + 1 < n; ++k) {
    absl::StatusOr<double> bound = BalanceBound(
        input.band_length, input.velocity[k], input.u_long[k], input.vehicle);
    if (!bound.ok()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "waypoint %d: %s", k, bound.status().message()));
    }
    sp.bound[k] = bound_scale * *bound;
    const AffineExpr nx =
        Combine({{2.0, &q[k].x}, {-1.0, &q[k - 1].x}, {-1.0, &q[k + 1].x}});
    const AffineExpr ny =
        Combine({{2.0, &q[k].y}, {-1.0, &q[k - 1].y}, {-1.0, &q[k + 1].y}});
    sp.program.AddSquaredAffine(nx, 1.0);
    sp.program.AddSquaredAffine(ny, 1.0);
    if (nx.terms.empty() && ny.terms.empty()) {
      const double norm = std::hypot(nx.constant, ny.constant);
      if (norm > sp.bound[k]) {
        return absl::FailedPreconditionError(absl::StrFormat(
            "stretch infeasible: fixed balance force %d is %g, bound %g", k,
            norm, sp.bound[k]));
      }
      continue;
    }
    const double scale =
        1.0 + std::hypot(nx.constant, ny.constant) + sp.bound[k];
    sp.program.AddSecondOrderCone(
        {nx, ny},
        AffineExpr(std::max(sp.bound[k] - margin * scale, 0.0)));
  }
  for (int k = sp.first_var; k <= sp.last_var; ++k) {
    const int v = 2 * (k - sp.first_var);
    const double r = input.bubbles.at(k).radius;
    sp.program.AddSecondOrderCone(
        {AffineExpr({{v, 1.0}}), AffineExpr({{v + 1, 1.0}})},
        AffineExpr(std::max(r - margin * (1.0 + r), 0.0)));
  }
  if (!sp.program.status().ok()) return sp.program.status();
  return sp;
}

StretchAudit AuditStretch(const StretchInput& input,
                          const std::vector<Point2>& waypoints,
                          double tolerance, double bound_scale) {
  StretchAudit audit;
  const int n = static_cast<int>(input.path.size());
  if (!ValidateInput(input).ok() || static_cast<int>(waypoints.size()) != n) {
    return audit;
  }
  const auto [anchor1, anchor2] = HeadingAnchors(input);
  audit.anchor_error = std::max(
      {(waypoints[0] - input.path[0]).norm(), (waypoints[1] - anchor1).norm(),
       (waypoints[n - 2] - anchor2).norm(),
       (waypoints[n - 1] - input.path[n - 1]).norm()});
  audit.ball_violation = -kInf;
  for (int k = 2; k <= n - 2; ++k) {
    const Bubble& b = input.bubbles.at(k);
    audit.ball_violation =
        std::max(audit.ball_violation,
                 ((waypoints[k] - b.center).norm() - b.radius) / (1.0 + b.radius));
  }
  audit.balance_violation = -kInf;
  bool bounds_ok = true;
  for (int k = 1; k + 1 < n; ++k) {
    absl::StatusOr<double> bound = BalanceBound(
        input.band_length, input.velocity[k], input.u_long[k], input.vehicle);
    if (!bound.ok()) {
      bounds_ok = false;
      continue;
    }
    const double b = bound_scale * *bound;
    const double norm =
        (2.0 * waypoints[k] - waypoints[k - 1] - waypoints[k + 1]).norm();
    audit.balance_violation =
        std::max(audit.balance_violation, (norm - b) / (1.0 + b));
  }
  audit.ok = bounds_ok && audit.anchor_error <= tolerance &&
             audit.ball_violation <= tolerance &&
             audit.balance_violation <= tolerance;
  return audit;
}

namespace {

StretchOutput MakeOutput(const StretchInput& input,
                         std::vector<Point2> waypoints,
                         const std::vector<double>& bound) {
  StretchOutput out;
  const int n = static_cast<int>(waypoints.size());
  out.waypoints = std::move(waypoints);
  out.objective = BalanceObjective(out.waypoints);
  out.balance_norm.assign(n, 0.0);
  out.balance_bound = bound;
  for (int k = 1; k + 1 < n; ++k) {
    out.balance_norm[k] = (2.0 * out.waypoints[k] - out.waypoints[k - 1] -
                           out.waypoints[k + 1])
                              .norm();
  }
  return out;
}

}  // namespace

absl::StatusOr<StretchOutput> SolveStretch(const StretchInput& input,
                                           const SolverSettings& settings,
                                           double bound_scale) {
  absl::StatusOr<StretchProgram> sp =
      BuildStretchProgram(input, bound_scale, settings.feas_tol);
  if (!sp.ok()) return sp.status();
  if (sp->program.num_vars() == 0) {
    return MakeOutput(input, sp->fixed, sp->bound);
  }
  absl::StatusOr<Solution> sol = Solve(sp->program, settings);
  if (!sol.ok()) return sol.status();
  if (sol->status == SolveStatus::kInfeasible) {
    // Report the constraints the final iterate violates most.
    std::vector<std::pair<double, int>> worst;
    const auto& blocks = sp->program.blocks();
    for (size_t i = 0; i < blocks.size(); ++i) {
      const double v = sp->program.BlockViolation(blocks[i], sol->x) /
                       sp->program.BlockScale(blocks[i]);
      if (v > settings.feas_tol) worst.emplace_back(v, static_cast<int>(i));
    }
    std::sort(worst.rbegin(), worst.rend());
    if (worst.size() > kMaxReportedConstraints) {
      worst.resize(kMaxReportedConstraints);
    }
    // Balance cones come first (one per constrained waypoint), then balls.
    std::vector<int> balance_rows;
    for (int k = 1; k + 1 < static_cast<int>(input.path.size()); ++k) {
      if (sp->IsVariable(k - 1) || sp->IsVariable(k) || sp->IsVariable(k + 1)) {
        balance_rows.push_back(k);
      }
    }
    std::vector<std::string> names;
    for (const auto& [v, i] : worst) {
      if (i < static_cast<int>(balance_rows.size())) {
        names.push_back(absl::StrFormat("balance[%d]", balance_rows[i]));
      } else {
        names.push_back(absl::StrFormat(
            "ball[%d]", sp->first_var + i - static_cast<int>(balance_rows.size())));
      }
    }
    return absl::FailedPreconditionError(absl::StrFormat(
        "stretch infeasible; binding constraints: %s",
        names.empty() ? "unknown" : absl::StrJoin(names, ", ")));
  }
  StretchOutput out =
      MakeOutput(input, sp->Waypoints(sol->x, input.bubbles), sp->bound);
  out.status = sol->status;
  out.iterations = sol->iterations;
  return out;
}

absl::StatusOr<StretchOutput> Stretch(const StretchInput& input,
                                      const SolverSettings& settings) {
  if (absl::Status s = ValidateInput(input); !s.ok()) return s;
  absl::StatusOr<StretchOutput> out = SolveStretch(input, settings);
  if (out.ok() || out.status().code() != absl::StatusCode::kFailedPrecondition) {
    return out;
  }
  const std::string first_error(out.status().message());
  out = SolveStretch(input, settings, kRelaxFactor);
  if (out.ok()) {
    out->relaxed = true;
    out->warnings.push_back(absl::StrFormat(
        "%s; balance bounds widened by %g", first_error, kRelaxFactor));
    return out;
  }
  if (out.status().code() != absl::StatusCode::kFailedPrecondition) return out;
  std::vector<double> bounds(input.path.size(), 0.0);
  StretchOutput fallback = MakeOutput(input, input.path, bounds);
  fallback.unchanged = true;
  fallback.status = SolveStatus::kInfeasible;
  fallback.warnings.push_back(first_error);
  fallback.warnings.push_back(absl::StrFormat(
      "%s; path left unchanged", out.status().message()));
  return fallback;
}

void WriteStretchCsv(const StretchOutput& output, std::ostream& out) {
  out << "k,x,y,balance_norm,bound\n";
  out << std::setprecision(17);
  for (size_t k = 0; k < output.waypoints.size(); ++k) {
    out << k << ',' << output.waypoints[k].x() << ','
        << output.waypoints[k].y() << ',' << output.balance_norm[k] << ','
        << output.balance_bound[k] << '\n';
  }
}

}  // namespace ces
