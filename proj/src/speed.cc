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

#include "ces/speed.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ces {

double PathGeometry::MaxAbsCurvature() const {
  double out = 0.0;
  for (double k : curvature) out = std::max(out, std::abs(k));
  return out;
}

absl::StatusOr<PathGeometry> ComputePathGeometry(
    const std::vector<Point2>& waypoints) {
  const int n = static_cast<int>(waypoints.size());
  if (n < 3) {
    return absl::InvalidArgumentError(
        absl::StrFormat("path geometry needs at least 3 waypoints, got %d", n));
  }
  PathGeometry geom;
  geom.points = waypoints;
  geom.s.push_back(0.0);
  for (int k = 0; k + 1 < n; ++k) {
    const double len = (waypoints[k + 1] - waypoints[k]).norm();
    if (!(len > kGeometryTolerance)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "degenerate path: waypoints %d and %d coincide", k, k + 1));
    }
    geom.ds.push_back(len);
    geom.s.push_back(geom.s.back() + len);
  }
  geom.tangents.resize(n);
  geom.curvature.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    const int lo = std::max(k - 1, 0);
    const int hi = std::min(k + 1, n - 1);
    geom.tangents[k] = (waypoints[hi] - waypoints[lo]).normalized();
    if (k > 0 && k < n - 1) {
      geom.curvature[k] =
          MengerCurvature(waypoints[k - 1], waypoints[k], waypoints[k + 1]);
    }
  }
  return geom;
}

absl::StatusOr<SpeedProgram> BuildSpeedProgram(const PathGeometry& geom,
                                               const VehicleParams& vehicle,
                                               const BoundarySpeeds& boundary,
                                               double margin) {
  if (absl::Status s = ValidateVehicleParams(vehicle); !s.ok()) return s;
  const int n = geom.size();
  if (n < 3 || static_cast<int>(geom.ds.size()) != n - 1 ||
      static_cast<int>(geom.curvature.size()) != n) {
    return absl::InvalidArgumentError("inconsistent path geometry");
  }
  if (boundary.start < 0.0 || boundary.end < 0.0) {
    return absl::InvalidArgumentError("boundary speeds must be non-negative");
  }
  SpeedProgram sp{ConeProgram(4 * n - 2), n, 0, n, 2 * n - 1, 3 * n - 1};
  ConeProgram& p = sp.program;
  const auto b = [&](int k) { return sp.b_offset + k; };
  const auto a = [&](int k) { return sp.a_offset + k; };
  const auto w = [&](int k) { return sp.w_offset + k; };
  const auto c = [&](int k) { return sp.c_offset + k; };

  const double mu_g = vehicle.mu * vehicle.g;
  const double a_max = vehicle.MaxAcceleration();
  const double friction_bound = mu_g - margin * (1.0 + mu_g);
  const double traction_bound = a_max - margin * (1.0 + a_max);

  for (int k = 0; k < n; ++k) {
    p.AddInterval(AffineExpr({{b(k), 1.0}}), 0.0,
                  std::numeric_limits<double>::infinity());
  }
  for (int k = 0; k + 1 < n; ++k) {
    p.AddEquality(
        AffineExpr({{b(k + 1), 1.0}, {b(k), -1.0}, {a(k), -2.0 * geom.ds[k]}}),
        0.0);
  }
  p.AddEquality(AffineExpr({{b(0), 1.0}}), boundary.start * boundary.start);
  p.AddEquality(AffineExpr({{b(n - 1), 1.0}}), boundary.end * boundary.end);

  for (int k = 0; k < n; ++k) {
    // Longitudinal acceleration at the waypoint: average of the adjacent
    // segments, one-sided at the ends.
    AffineExpr along;
    if (k == 0) {
      along = AffineExpr({{a(0), 1.0}});
    } else if (k == n - 1) {
      along = AffineExpr({{a(n - 2), 1.0}});
    } else {
      along = AffineExpr({{a(k - 1), 0.5}, {a(k), 0.5}});
    }
    const AffineExpr lateral({{b(k), geom.curvature[k]}});
    p.AddSecondOrderCone({along, lateral}, AffineExpr(friction_bound));
    p.AddInterval(along, -std::numeric_limits<double>::infinity(),
                  traction_bound);
  }

  for (int k = 0; k < n; ++k) {
    // w_k^2 <= b_k  <=>  |(2 w_k, b_k - 1)| <= b_k + 1.
    p.AddSecondOrderCone(
        {AffineExpr({{w(k), 2.0}}), AffineExpr({{b(k), 1.0}}, -1.0)},
        AffineExpr({{b(k), 1.0}}, 1.0));
  }
  // At the endpoints b is fixed, so w <= sqrt(b) is linear. Stating it
  // directly avoids the infinite slope of the square root at rest.
  p.AddInterval(AffineExpr({{w(0), 1.0}}),
                -std::numeric_limits<double>::infinity(), boundary.start);
  p.AddInterval(AffineExpr({{w(n - 1), 1.0}}),
                -std::numeric_limits<double>::infinity(), boundary.end);
  for (int k = 0; k + 1 < n; ++k) {
    // c_k (w_k + w_k+1) >= 2 ds_k, as a rotated cone.
    p.AddSecondOrderCone(
        {AffineExpr(2.0 * std::sqrt(2.0 * geom.ds[k])),
         AffineExpr({{c(k), 1.0}, {w(k), -1.0}, {w(k + 1), -1.0}})},
        AffineExpr({{c(k), 1.0}, {w(k), 1.0}, {w(k + 1), 1.0}}));
    p.AddLinear(c(k), 1.0);
  }
  return sp;
}

double SpeedProfile::Speed(int k) const { return std::sqrt(std::max(b[k], 0.0)); }

absl::StatusOr<double> TraversalTime(const std::vector<double>& ds,
                                     const std::vector<double>& b) {
  if (b.size() != ds.size() + 1) {
    return absl::InvalidArgumentError("speed and segment counts disagree");
  }
  double total = 0.0;
  for (size_t k = 0; k < ds.size(); ++k) {
    const double v = std::sqrt(std::max(b[k], 0.0)) +
                     std::sqrt(std::max(b[k + 1], 0.0));
    if (ds[k] == 0.0) continue;
    if (!(v > 0.0)) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "degenerate profile: zero speed on segment %d of length %g", k,
          ds[k]));
    }
    total += 2.0 * ds[k] / v;
  }
  return total;
}

namespace {

absl::StatusOr<SpeedProfile> FinishProfile(const PathGeometry& geom,
                                           const VehicleParams& vehicle,
                                           std::vector<double> b,
                                           std::vector<double> a) {
  const int n = geom.size();
  SpeedProfile profile;
  profile.b = std::move(b);
  profile.a = std::move(a);
  profile.velocity.resize(n);
  profile.u_long.resize(n);
  profile.u_lat.resize(n);
  for (int k = 0; k < n; ++k) {
    profile.velocity[k] = profile.Speed(k) * geom.tangents[k];
    double along;
    if (k == 0) {
      along = profile.a[0];
    } else if (k == n - 1) {
      along = profile.a[n - 2];
    } else {
      along = 0.5 * (profile.a[k - 1] + profile.a[k]);
    }
    profile.u_long[k] = vehicle.mass_kg * along;
    profile.u_lat[k] = vehicle.mass_kg * geom.curvature[k] * profile.b[k];
  }
  absl::StatusOr<double> t = TraversalTime(geom.ds, profile.b);
  if (!t.ok()) return t.status();
  profile.traversal_time = *t;
  profile.epigraph_time = *t;
  return profile;
}

}  // namespace

absl::StatusOr<SpeedProfile> OptimizeSpeed(
    const std::vector<Point2>& waypoints, const VehicleParams& vehicle,
    const BoundarySpeeds& boundary, const SolverSettings& settings,
    const SpeedProfile* warm_start) {
  absl::StatusOr<PathGeometry> geom = ComputePathGeometry(waypoints);
  if (!geom.ok()) return geom.status();
  absl::StatusOr<SpeedProgram> sp =
      BuildSpeedProgram(*geom, vehicle, boundary, settings.feas_tol);
  if (!sp.ok()) return sp.status();

  WarmStart warm;
  const bool use_warm = warm_start != nullptr &&
                        warm_start->solver_x.size() == sp->program.num_vars();
  if (use_warm) {
    warm.x = warm_start->solver_x;
    if (warm_start->solver_y.size() == sp->program.num_rows()) {
      warm.y = warm_start->solver_y;
    }
  }
  absl::StatusOr<Solution> sol =
      Solve(sp->program, settings, use_warm ? &warm : nullptr);
  if (!sol.ok()) return sol.status();
  if (sol->status == SolveStatus::kInfeasible) {
    return absl::FailedPreconditionError(
        "speed program infeasible for the given boundary speeds");
  }
  const int n = sp->n;
  std::vector<double> b(n);
  std::vector<double> a(n - 1);
  double epigraph = 0.0;
  for (int k = 0; k < n; ++k) b[k] = std::max(sol->x(sp->b_offset + k), 0.0);
  for (int k = 0; k + 1 < n; ++k) {
    a[k] = sol->x(sp->a_offset + k);
    epigraph += sol->x(sp->c_offset + k);
  }
  // The endpoint equalities hold to solver tolerance; pin them exactly.
  b[0] = boundary.start * boundary.start;
  b[n - 1] = boundary.end * boundary.end;
  absl::StatusOr<SpeedProfile> profile =
      FinishProfile(*geom, vehicle, std::move(b), std::move(a));
  if (!profile.ok()) return profile.status();
  profile->epigraph_time = epigraph;
  profile->status = sol->status;
  profile->iterations = sol->iterations;
  profile->solver_x = std::move(sol->x);
  profile->solver_y = std::move(sol->y);
  return profile;
}

absl::StatusOr<SpeedProfile> ConstantSpeedProfile(
    const std::vector<Point2>& waypoints, const VehicleParams& vehicle,
    double speed) {
  if (!(speed > 0.0)) {
    return absl::InvalidArgumentError("constant speed must be positive");
  }
  absl::StatusOr<PathGeometry> geom = ComputePathGeometry(waypoints);
  if (!geom.ok()) return geom.status();
  return FinishProfile(*geom, vehicle,
                       std::vector<double>(geom->size(), speed * speed),
                       std::vector<double>(geom->size() - 1, 0.0));
}

SpeedAudit AuditSpeedProfile(const PathGeometry& geom,
                             const SpeedProfile& profile,
                             const VehicleParams& vehicle, double tolerance) {
  SpeedAudit audit;
  const int n = geom.size();
  if (profile.size() != n || static_cast<int>(profile.a.size()) != n - 1) {
    return audit;
  }
  const double mu_g = vehicle.mu * vehicle.g;
  audit.min_b = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    double along;
    if (k == 0) {
      along = profile.a[0];
    } else if (k == n - 1) {
      along = profile.a[n - 2];
    } else {
      along = 0.5 * (profile.a[k - 1] + profile.a[k]);
    }
    const double lateral = geom.curvature[k] * profile.b[k];
    audit.friction_ratio =
        std::max(audit.friction_ratio, std::hypot(along, lateral) / mu_g);
    audit.traction_ratio =
        std::max(audit.traction_ratio, along / vehicle.MaxAcceleration());
    audit.min_b = std::min(audit.min_b, profile.b[k]);
    if (geom.curvature[k] != 0.0) {
      audit.max_curvature_speed_excess =
          std::max(audit.max_curvature_speed_excess,
                   profile.b[k] * std::abs(geom.curvature[k]) / mu_g - 1.0);
    }
  }
  for (int k = 0; k + 1 < n; ++k) {
    const double err = std::abs(profile.b[k + 1] - profile.b[k] -
                                2.0 * profile.a[k] * geom.ds[k]);
    audit.coupling_error =
        std::max(audit.coupling_error,
                 err / (1.0 + std::abs(profile.b[k]) + std::abs(profile.b[k + 1])));
  }
  audit.ok = audit.friction_ratio <= 1.0 + tolerance &&
             audit.traction_ratio <= 1.0 + tolerance &&
             audit.min_b >= -tolerance && audit.coupling_error <= tolerance &&
             audit.max_curvature_speed_excess <= tolerance;
  return audit;
}

void WriteSpeedCsv(const PathGeometry& geom, const SpeedProfile& profile,
                   std::ostream& out) {
  out << "k,s,speed,u_long,u_lat\n";
  out << std::setprecision(17);
  for (int k = 0; k < profile.size(); ++k) {
    out << k << ',' << geom.s[k] << ',' << profile.Speed(k) << ','
        << profile.u_long[k] << ',' << profile.u_lat[k] << '\n';
  }
}

}  // namespace ces
