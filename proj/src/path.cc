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

#include "ces/path.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"

namespace ces {

absl::Status ValidateVehicleParams(const VehicleParams& params,
                                   std::vector<std::string>* warnings) {
  const double values[] = {params.mass_kg, params.mu, params.g,
                           params.u_long_max_n, params.r_min_m};
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      return absl::InvalidArgumentError(
          "vehicle parameters must be finite and strictly positive");
    }
  }
  if (params.u_long_max_n > params.FrictionLimit() && warnings != nullptr) {
    warnings->push_back(absl::StrFormat(
        "traction limit %g N exceeds friction limit %g N and never binds",
        params.u_long_max_n, params.FrictionLimit()));
  }
  return absl::OkStatus();
}

ReferencePath::ReferencePath(std::vector<Point2> waypoints)
    : waypoints_(std::move(waypoints)) {
  lengths_.reserve(waypoints_.size() - 1);
  for (size_t i = 0; i + 1 < waypoints_.size(); ++i) {
    lengths_.push_back((waypoints_[i + 1] - waypoints_[i]).norm());
  }
}

absl::StatusOr<ReferencePath> ReferencePath::Create(
    std::vector<Point2> waypoints, int min_points) {
  if (static_cast<int>(waypoints.size()) < min_points) {
    return absl::InvalidArgumentError(
        absl::StrFormat("path needs at least %d waypoints, got %d", min_points,
                        waypoints.size()));
  }
  for (size_t i = 0; i < waypoints.size(); ++i) {
    if (!waypoints[i].allFinite()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("waypoint %d is not finite", i));
    }
    if (i > 0 && (waypoints[i] - waypoints[i - 1]).norm() <= kGeometryTolerance) {
      return absl::InvalidArgumentError(
          absl::StrFormat("waypoints %d and %d coincide", i - 1, i));
    }
  }
  return ReferencePath(std::move(waypoints));
}

double ReferencePath::Length() const {
  double total = 0.0;
  for (double l : lengths_) total += l;
  return total;
}

double ReferencePath::AverageBandLength() const {
  return Length() / static_cast<double>(lengths_.size());
}

Point2 ReferencePath::Tangent(int i) const {
  const int n = size();
  const int lo = i == 0 ? 0 : i - 1;
  const int hi = i == n - 1 ? n - 1 : i + 1;
  return (waypoints_[hi] - waypoints_[lo]).normalized();
}

double PolylineLength(const std::vector<Point2>& points) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    total += (points[i + 1] - points[i]).norm();
  }
  return total;
}

double AverageBandLength(const std::vector<Point2>& points) {
  if (points.size() < 2) return 0.0;
  return PolylineLength(points) / static_cast<double>(points.size() - 1);
}

double MengerCurvature(const Point2& a, const Point2& b, const Point2& c) {
  const double ab = (b - a).norm();
  const double bc = (c - b).norm();
  const double ca = (a - c).norm();
  const double denom = ab * bc * ca;
  if (denom <= 0.0) return 0.0;
  return 2.0 * Cross(b - a, c - b) / denom;
}

}  // namespace ces
