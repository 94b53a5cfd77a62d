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

#ifndef CES_GEOMETRY_H_
#define CES_GEOMETRY_H_

#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"

namespace ces {

using Point2 = Eigen::Vector2d;

// Absolute tolerance for degeneracy tests (collinearity, vertex grazing).
inline constexpr double kGeometryTolerance = 1e-12;

double Cross(const Point2& a, const Point2& b);

// Closest point to `p` on segment [a, b].
Point2 ClosestPointOnSegment(const Point2& p, const Point2& a, const Point2& b);

double PointSegmentDistance(const Point2& p, const Point2& a, const Point2& b);

// Closed-segment intersection test, touching and collinear overlap included.
bool SegmentsIntersect(const Point2& a, const Point2& b, const Point2& c,
                       const Point2& d);

struct AlignedBox {
  Point2 min;
  Point2 max;

  bool Contains(const Point2& p) const;
  // Euclidean distance from `p` to the box, zero when inside.
  double Distance(const Point2& p) const;
  double Area() const { return (max - min).prod(); }
};

// A simple polygon stored counter-clockwise. Closed set: boundary points
// belong to the polygon.
class Polygon {
 public:
  // Validates vertex count, simplicity and non-zero area; clockwise input is
  // reversed.
  static absl::StatusOr<Polygon> Create(std::vector<Point2> vertices);
  static Polygon Rectangle(const Point2& min, const Point2& max);

  const std::vector<Point2>& vertices() const { return vertices_; }
  int num_edges() const { return static_cast<int>(vertices_.size()); }
  const Point2& edge_start(int i) const { return vertices_[i]; }
  const Point2& edge_end(int i) const {
    return vertices_[(i + 1) % vertices_.size()];
  }
  const AlignedBox& bounding_box() const { return box_; }

  double Area() const;
  Point2 Centroid() const;
  bool Contains(const Point2& p) const;
  double BoundaryDistance(const Point2& p) const;

 private:
  explicit Polygon(std::vector<Point2> vertices);

  std::vector<Point2> vertices_;
  AlignedBox box_;
};

// The obstacle feature closest to a query point.
struct NearestFeature {
  double distance = 0.0;
  // Index into the obstacle list, or -1 for the workspace boundary.
  int obstacle = -1;
  // Edge index within the obstacle (side index 0..3 for the boundary:
  // xmin, ymin, xmax, ymax).
  int edge = -1;
  bool at_vertex = false;
  Point2 closest = Point2::Zero();
  // Unit direction pointing from the feature into free space.
  Point2 away = Point2::Zero();
};

// Bounded 2D region with polygonal obstacles. Immutable after construction,
// so all queries are safe to call concurrently.
class Workspace {
 public:
  static absl::StatusOr<Workspace> Create(AlignedBox bounds,
                                          std::vector<Polygon> obstacles);

  const AlignedBox& bounds() const { return bounds_; }
  const std::vector<Polygon>& obstacles() const { return obstacles_; }

  // Minimum distance from `p` to any obstacle or to the workspace boundary;
  // zero inside an obstacle. Fails when `p` is outside the bounds.
  absl::StatusOr<double> DistanceToObstacles(const Point2& p) const;

  // Unchecked version of DistanceToObstacles; `p` must lie within bounds.
  double Clearance(const Point2& p) const;

  // Feature realizing Clearance(p). Ties resolve to the lowest obstacle
  // index, then the lowest edge index; the boundary comes last.
  NearestFeature Nearest(const Point2& p) const;

  // True inside or on any obstacle, and on or outside the bounds.
  bool PointInCollision(const Point2& p) const;

  // True if the closed segment touches any obstacle or leaves the bounds.
  bool SegmentInCollision(const Point2& a, const Point2& b) const;

  // True if the closed disk touches any obstacle or the boundary.
  bool DiskInCollision(const Point2& center, double radius) const;

  // Moves a colliding point to the nearest free location plus `margin`.
  // Free points are returned unchanged.
  absl::StatusOr<Point2> ProjectToFree(const Point2& p, double margin) const;

 private:
  Workspace(AlignedBox bounds, std::vector<Polygon> obstacles);

  double BoundaryClearance(const Point2& p) const;

  AlignedBox bounds_;
  std::vector<Polygon> obstacles_;
};

}  // namespace ces

#endif  // CES_GEOMETRY_H_
