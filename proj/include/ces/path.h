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

#ifndef CES_PATH_H_
#define CES_PATH_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ces/geometry.h"

namespace ces {

// Unicycle vehicle with a friction circle, a traction limit and a minimum
// turning radius.
struct VehicleParams {
  double mass_kg = 833.0;
  double mu = 0.8;
  double g = 9.81;
  double u_long_max_n = 0.5 * 0.8 * 833.0 * 9.81;
  double r_min_m = 5.0;

  double FrictionLimit() const { return mu * mass_kg * g; }
  double MaxAcceleration() const { return u_long_max_n / mass_kg; }
};

// Fails on non-positive parameters. A traction limit above the friction
// limit is legal but never binds; a warning is appended in that case.
absl::Status ValidateVehicleParams(const VehicleParams& params,
                                   std::vector<std::string>* warnings = nullptr);

// Ordered waypoints with segment lengths. Consecutive waypoints are distinct.
class ReferencePath {
 public:
  static absl::StatusOr<ReferencePath> Create(std::vector<Point2> waypoints,
                                              int min_points = 4);

  const std::vector<Point2>& waypoints() const { return waypoints_; }
  int size() const { return static_cast<int>(waypoints_.size()); }
  const Point2& operator[](int i) const { return waypoints_[i]; }
  const std::vector<double>& segment_lengths() const { return lengths_; }
  double Length() const;
  // Mean segment length, the band length used by the stretching step.
  double AverageBandLength() const;
  // Central-difference unit tangent (one-sided at the endpoints).
  Point2 Tangent(int i) const;

 private:
  explicit ReferencePath(std::vector<Point2> waypoints);

  std::vector<Point2> waypoints_;
  std::vector<double> lengths_;
};

double PolylineLength(const std::vector<Point2>& points);

// Mean segment length of a polyline.
double AverageBandLength(const std::vector<Point2>& points);

// Signed curvature of the circle through three points; zero when collinear.
double MengerCurvature(const Point2& a, const Point2& b, const Point2& c);

}  // namespace ces

#endif  // CES_PATH_H_
