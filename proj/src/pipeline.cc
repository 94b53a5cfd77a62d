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

#include "ces/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ces {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kParallelCross = 1e-9;
constexpr double kProjectionMargin = 1e-3;
constexpr double kCurvatureSlack = 1e-9;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

double Heading(const Point2& v) { return std::atan2(v.y(), v.x()); }

double MaxMengerCurvature(const std::vector<Point2>& q) {
  double out = 0.0;
  for (size_t k = 1; k + 1 < q.size(); ++k) {
    out = std::max(out, std::abs(MengerCurvature(q[k - 1], q[k], q[k + 1])));
  }
  return out;
}

}  // namespace

absl::Status ValidateCesConfig(const CesConfig& config) {
  if (absl::Status s = ValidateBubbleParams(config.bubbles); !s.ok()) return s;
  if (absl::Status s = ValidateVehicleParams(config.vehicle); !s.ok()) return s;
  if (absl::Status s = ValidateSettings(config.solver); !s.ok()) return s;
  if (config.max_iterations < 1) {
    return absl::InvalidArgumentError("max_iterations must be at least 1");
  }
  if (!(config.time_tolerance > 0.0)) {
    return absl::InvalidArgumentError("time tolerance must be positive");
  }
  if (config.timeout_s.has_value() && !(*config.timeout_s > 0.0)) {
    return absl::InvalidArgumentError("timeout must be positive");
  }
  if (config.constant_speed_mode && !(config.constant_speed > 0.0)) {
    return absl::InvalidArgumentError("constant speed must be positive");
  }
  if (config.boundary.start < 0.0 || config.boundary.end < 0.0) {
    return absl::InvalidArgumentError("boundary speeds must be non-negative");
  }
  return absl::OkStatus();
}

Point2 ArcSegment::PointAt(double t) const {
  if (kind == Kind::kLine) return start + t * (end - start);
  const Point2 r0 = start - center;
  const double angle = std::atan2(r0.y(), r0.x()) + t * sweep;
  const double radius = start_radius + t * (end_radius - start_radius);
  return center + radius * Point2(std::cos(angle), std::sin(angle));
}

double ArcSegment::Length() const {
  if (kind == Kind::kLine) return (end - start).norm();
  return 0.5 * (start_radius + end_radius) * std::abs(sweep);
}

std::vector<ArcSegment> ReconstructTrajectory(
    const std::vector<Point2>& waypoints, const std::vector<Point2>& velocity) {
  std::vector<ArcSegment> out;
  const size_t n = std::min(waypoints.size(), velocity.size());
  for (size_t k = 0; k + 1 < n; ++k) {
    ArcSegment seg;
    seg.start = waypoints[k];
    seg.end = waypoints[k + 1];
    const Point2 chord = seg.end - seg.start;
    Point2 h0 = velocity[k];
    Point2 h1 = velocity[k + 1];
    h0 = h0.norm() > 0.0 ? Point2(h0.normalized()) : Point2(chord.normalized());
    h1 = h1.norm() > 0.0 ? Point2(h1.normalized()) : Point2(chord.normalized());
    seg.start_heading = Heading(h0);
    seg.end_heading = Heading(h1);
    const double cross = Cross(h0, h1);
    if (std::abs(cross) >= kParallelCross) {
      // Intersect start + s n0 with end + t n1, n = left normal.
      const Point2 n0(-h0.y(), h0.x());
      const Point2 n1(-h1.y(), h1.x());
      const double den = Cross(n0, n1);
      const double s = Cross(chord, n1) / den;
      const Point2 c = seg.start + s * n0;
      const Point2 r0 = seg.start - c;
      const Point2 r1 = seg.end - c;
      seg.center = c;
      seg.start_radius = r0.norm();
      seg.end_radius = r1.norm();
      seg.sweep = std::atan2(Cross(r0, r1), r0.dot(r1));
      if (std::max(seg.start_radius, seg.end_radius) <= kMaxArcRadius) {
        seg.kind = ArcSegment::Kind::kArc;
      }
    }
    out.push_back(seg);
  }
  return out;
}

std::vector<std::string> CheckSegments(const std::vector<ArcSegment>& segments,
                                       const Workspace& w,
                                       int samples_per_arc) {
  std::vector<std::string> warnings;
  for (size_t k = 0; k < segments.size(); ++k) {
    const ArcSegment& seg = segments[k];
    bool hit = false;
    if (seg.kind == ArcSegment::Kind::kLine) {
      hit = w.SegmentInCollision(seg.start, seg.end);
    } else {
      for (int i = 0; i < samples_per_arc && !hit; ++i) {
        hit = w.PointInCollision(
            seg.PointAt(static_cast<double>(i) / (samples_per_arc - 1)));
      }
    }
    if (hit) {
      warnings.push_back(
          absl::StrFormat("segment %d between waypoints %d and %d collides", k,
                          k, k + 1));
    }
  }
  return warnings;
}

absl::StatusOr<double> TrajectoryTime(const std::vector<Point2>& waypoints,
                                      const SpeedProfile& profile) {
  std::vector<double> ds;
  for (size_t k = 0; k + 1 < waypoints.size(); ++k) {
    ds.push_back((waypoints[k + 1] - waypoints[k]).norm());
  }
  return TraversalTime(ds, profile.b);
}

double CesResult::TimeReductionPercent() const {
  if (!std::isfinite(initial_time) || initial_time <= 0.0) return kNaN;
  return 100.0 * (initial_time - final_time) / initial_time;
}

double CesResult::LengthReductionPercent() const {
  if (!(initial_length > 0.0)) return kNaN;
  return 100.0 * (initial_length - final_length) / initial_length;
}

absl::StatusOr<CesResult> RunCes(const std::vector<Point2>& reference,
                                 const Workspace& w, const CesConfig& config) {
  if (absl::Status s = ValidateCesConfig(config); !s.ok()) return s;
  absl::StatusOr<ReferencePath> ref = ReferencePath::Create(reference);
  if (!ref.ok()) return ref.status();
  for (size_t k = 0; k < reference.size(); ++k) {
    if (!w.bounds().Contains(reference[k])) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "reference waypoint %d lies outside the workspace bounds", k));
    }
  }

  if (w.PointInCollision(reference.front()) ||
      w.PointInCollision(reference.back())) {
    return absl::FailedPreconditionError(
        "start or goal lies inside an obstacle; the goal is unreachable");
  }

  const Stopwatch total;
  CesResult result;
  result.reference = reference;
  result.initial_length = ref->Length();
  result.reference_feasible =
      MaxMengerCurvature(reference) <=
      1.0 / config.vehicle.r_min_m + kCurvatureSlack;
  if (!result.reference_feasible) {
    result.warnings.push_back(
        "reference curvature exceeds 1/r_min; it is not dynamically feasible");
  }
  for (size_t k = 0; k < reference.size(); ++k) {
    if (w.PointInCollision(reference[k])) {
      result.warnings.push_back(absl::StrFormat(
          "reference waypoint %d is in collision; its bubble is generated at "
          "the nearest free point",
          k));
    }
  }

  SolverSettings solver = config.solver;
  const auto remaining = [&]() -> std::optional<double> {
    if (!config.timeout_s.has_value()) return std::nullopt;
    return *config.timeout_s - total.Seconds();
  };
  const auto optimize = [&](const std::vector<Point2>& q)
      -> absl::StatusOr<SpeedProfile> {
    if (config.constant_speed_mode) {
      return ConstantSpeedProfile(q, config.vehicle, config.constant_speed);
    }
    if (std::optional<double> left = remaining(); left.has_value()) {
      solver.time_limit_s = std::max(*left, 1e-3);
    }
    absl::StatusOr<SpeedProfile> p =
        OptimizeSpeed(q, config.vehicle, config.boundary, solver);
    if (p.ok() && p->status != SolveStatus::kOptimal) {
      return absl::DeadlineExceededError(absl::StrFormat(
          "speed optimization ended with status %s", std::string(ToString(p->status))));
    }
    return p;
  };

  std::vector<Point2> current = reference;
  IterationRecord rec0;
  rec0.length = result.initial_length;
  rec0.stretch_objective = BalanceObjective(reference);
  {
    const Stopwatch sw;
    absl::StatusOr<SpeedProfile> p = optimize(reference);
    rec0.times.speed_s = sw.Seconds();
    if (p.ok()) {
      result.profile = *std::move(p);
      rec0.traversal_time = result.profile->traversal_time;
    } else {
      rec0.traversal_time = kNaN;
      rec0.note = absl::StrFormat("reference speed profile: %s", std::string(p.status().message()));
      result.warnings.push_back(rec0.note);
    }
  }
  rec0.accepted = true;
  result.history.push_back(rec0);
  result.initial_time = rec0.traversal_time;
  double best_time = std::isfinite(rec0.traversal_time) ? rec0.traversal_time : kInf;
  std::optional<SpeedProfile> stretch_profile;
  if (config.speed_first) stretch_profile = result.profile;

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    IterationRecord rec;
    rec.iteration = iter;
    rec.traversal_time = kNaN;
    if (std::optional<double> left = remaining(); left.has_value() && *left <= 0.0) {
      result.warnings.push_back("timeout reached");
      break;
    }
    // Bubbles around the current waypoints, moved off obstacles if needed.
    Stopwatch sw;
    std::vector<Point2> centers = current;
    for (Point2& p : centers) {
      if (w.PointInCollision(p)) {
        absl::StatusOr<Point2> free = w.ProjectToFree(p, kProjectionMargin);
        if (free.ok()) p = *free;
      }
    }
    absl::StatusOr<BubbleSequence> bubbles =
        GenerateBubbles(centers, w, config.bubbles);
    rec.times.bubbles_s = sw.Seconds();
    if (!bubbles.ok()) {
      rec.note = absl::StrFormat("bubbles: %s", std::string(bubbles.status().message()));
      result.history.push_back(rec);
      break;
    }

    StretchInput in;
    in.path = current;
    in.bubbles = *bubbles;
    in.vehicle = config.vehicle;
    in.band_length = AverageBandLength(current);
    rec.band_length = in.band_length;
    if (stretch_profile.has_value()) {
      in.velocity = stretch_profile->velocity;
      in.u_long = stretch_profile->u_long;
    } else {
      in.velocity.assign(current.size(), Point2::Zero());
      in.u_long.assign(current.size(), 0.0);
    }
    sw = Stopwatch();
    if (std::optional<double> left = remaining(); left.has_value()) {
      solver.time_limit_s = std::max(*left, 1e-3);
    }
    absl::StatusOr<StretchOutput> stretched = Stretch(in, solver);
    rec.times.stretch_s = sw.Seconds();
    if (!stretched.ok()) {
      rec.note = absl::StrFormat("stretch: %s", std::string(stretched.status().message()));
      result.history.push_back(rec);
      break;
    }
    rec.stretch_objective = stretched->objective;
    rec.length = PolylineLength(stretched->waypoints);
    rec.stretch_relaxed = stretched->relaxed;
    for (const std::string& msg : stretched->warnings) {
      result.warnings.push_back(absl::StrFormat("iteration %d: %s", iter, msg));
    }
    if (stretched->unchanged || stretched->status != SolveStatus::kOptimal) {
      rec.note = "stretch found no feasible update";
      result.history.push_back(rec);
      break;
    }

    sw = Stopwatch();
    absl::StatusOr<SpeedProfile> profile = optimize(stretched->waypoints);
    rec.times.speed_s = sw.Seconds();
    if (!profile.ok()) {
      rec.note = absl::StrFormat("speed: %s", std::string(profile.status().message()));
      result.history.push_back(rec);
      break;
    }
    rec.traversal_time = profile->traversal_time;
    if (stretched->relaxed) {
      // Widened bounds break the balance-force guarantee; never accept.
      rec.note = "stretch needed widened bounds; iteration rejected";
      result.history.push_back(rec);
      break;
    }
    rec.accepted = std::isinf(best_time)
                       ? std::isfinite(rec.traversal_time)
                       : rec.traversal_time <=
                             best_time * (1.0 - config.time_tolerance);
    result.history.push_back(rec);
    if (!rec.accepted) break;
    best_time = rec.traversal_time;
    current = stretched->waypoints;
    result.profile = *profile;
    stretch_profile = *std::move(profile);
    result.final_stretch = std::move(in);
    result.final_bubbles = *std::move(bubbles);
    ++result.accepted_iterations;
  }

  result.waypoints = current;
  result.final_length = PolylineLength(current);
  result.final_time = result.profile.has_value() ? result.profile->traversal_time : kNaN;
  if (result.profile.has_value()) {
    result.segments = ReconstructTrajectory(current, result.profile->velocity);
  } else {
    std::vector<Point2> tangents;
    for (size_t k = 0; k < current.size(); ++k) {
      const size_t lo = k == 0 ? 0 : k - 1;
      const size_t hi = std::min(k + 1, current.size() - 1);
      tangents.push_back((current[hi] - current[lo]).normalized());
    }
    result.segments = ReconstructTrajectory(current, tangents);
  }
  for (std::string& msg : CheckSegments(result.segments, w)) {
    result.warnings.push_back(std::move(msg));
  }
  result.wall_time_s = total.Seconds();
  return result;
}

TrajectoryAudit AuditResult(const CesResult& result, const CesConfig& config,
                            double tolerance) {
  TrajectoryAudit audit;
  audit.max_curvature = MaxMengerCurvature(result.waypoints);
  bool ok = true;
  if (result.final_stretch.has_value()) {
    audit.stretched = true;
    const StretchAudit s =
        AuditStretch(*result.final_stretch, result.waypoints, tolerance);
    audit.ball_violation = s.ball_violation;
    audit.balance_violation = s.balance_violation;
    ok = ok && s.ok;
  }
  if (!result.profile.has_value()) return audit;
  absl::StatusOr<PathGeometry> geom = ComputePathGeometry(result.waypoints);
  if (!geom.ok()) return audit;
  const SpeedAudit s = AuditSpeedProfile(*geom, *result.profile, config.vehicle,
                                         tolerance);
  audit.friction_ratio = s.friction_ratio;
  audit.traction_ratio = s.traction_ratio;
  audit.ok = ok && s.ok;
  return audit;
}

}  // namespace ces
