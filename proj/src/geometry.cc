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

#include "ces/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ces {
namespace {

constexpr int kMaxProjectionRounds = 32;

int Orientation(const Point2& a, const Point2& b, const Point2& c) {
  const double v = Cross(b - a, c - a);
  if (v > kGeometryTolerance) return 1;
  if (v < -kGeometryTolerance) return -1;
  return 0;
}

bool OnSegment(const Point2& p, const Point2& a, const Point2& b) {
  return PointSegmentDistance(p, a, b) <= kGeometryTolerance;
}

double SignedArea(const std::vector<Point2>& v) {
  double area = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    area += Cross(v[i], v[(i + 1) % v.size()]);
  }
  return 0.5 * area;
}

}  // namespace

double Cross(const Point2& a, const Point2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

Point2 ClosestPointOnSegment(const Point2& p, const Point2& a,
                             const Point2& b) {
  const Point2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

double PointSegmentDistance(const Point2& p, const Point2& a,
                            const Point2& b) {
  return (p - ClosestPointOnSegment(p, a, b)).norm();
}

bool SegmentsIntersect(const Point2& a, const Point2& b, const Point2& c,
                       const Point2& d) {
  const int o1 = Orientation(a, b, c);
  const int o2 = Orientation(a, b, d);
  const int o3 = Orientation(c, d, a);
  const int o4 = Orientation(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  // Remaining cases involve touching or collinearity.
  return OnSegment(c, a, b) || OnSegment(d, a, b) || OnSegment(a, c, d) ||
         OnSegment(b, c, d);
}

bool AlignedBox::Contains(const Point2& p) const {
  return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
         p.y() <= max.y();
}

double AlignedBox::Distance(const Point2& p) const {
  const double dx = std::max({min.x() - p.x(), 0.0, p.x() - max.x()});
  const double dy = std::max({min.y() - p.y(), 0.0, p.y() - max.y()});
  return std::hypot(dx, dy);
}

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  box_.min = box_.max = vertices_.front();
  for (const Point2& v : vertices_) {
    box_.min = box_.min.cwiseMin(v);
    box_.max = box_.max.cwiseMax(v);
  }
}

absl::StatusOr<Polygon> Polygon::Create(std::vector<Point2> vertices) {
  if (vertices.size() < 3) {
    return absl::InvalidArgumentError(
        absl::StrFormat("polygon needs at least 3 vertices, got %d",
                        vertices.size()));
  }
  for (const Point2& v : vertices) {
    if (!v.allFinite()) {
      return absl::InvalidArgumentError("polygon vertex is not finite");
    }
  }
  const double area = SignedArea(vertices);
  if (std::abs(area) <= kGeometryTolerance) {
    return absl::InvalidArgumentError("polygon has zero area");
  }
  if (area < 0.0) std::reverse(vertices.begin(), vertices.end());

  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2& a = vertices[i];
    const Point2& b = vertices[(i + 1) % n];
    if ((b - a).norm() <= kGeometryTolerance) {
      return absl::InvalidArgumentError("polygon has repeated vertices");
    }
    for (size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (SegmentsIntersect(a, b, vertices[j], vertices[(j + 1) % n])) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "polygon is self-intersecting at edges %d and %d", i, j));
      }
    }
  }
  return Polygon(std::move(vertices));
}

Polygon Polygon::Rectangle(const Point2& min, const Point2& max) {
  return Polygon({min, Point2(max.x(), min.y()), max, Point2(min.x(), max.y())});
}

double Polygon::Area() const { return SignedArea(vertices_); }

Point2 Polygon::Centroid() const {
  Point2 c = Point2::Zero();
  double area = 0.0;
  for (int i = 0; i < num_edges(); ++i) {
    const double w = Cross(edge_start(i), edge_end(i));
    c += w * (edge_start(i) + edge_end(i));
    area += w;
  }
  return c / (3.0 * area);
}

bool Polygon::Contains(const Point2& p) const {
  if (box_.Distance(p) > kGeometryTolerance) return false;
  bool inside = false;
  for (int i = 0; i < num_edges(); ++i) {
    const Point2& a = edge_start(i);
    const Point2& b = edge_end(i);
    if (OnSegment(p, a, b)) return true;
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double Polygon::BoundaryDistance(const Point2& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < num_edges(); ++i) {
    best = std::min(best, PointSegmentDistance(p, edge_start(i), edge_end(i)));
  }
  return best;
}

Workspace::Workspace(AlignedBox bounds, std::vector<Polygon> obstacles)
    : bounds_(std::move(bounds)), obstacles_(std::move(obstacles)) {}

absl::StatusOr<Workspace> Workspace::Create(AlignedBox bounds,
                                            std::vector<Polygon> obstacles) {
  if (!bounds.min.allFinite() || !bounds.max.allFinite() ||
      bounds.min.x() >= bounds.max.x() || bounds.min.y() >= bounds.max.y()) {
    return absl::InvalidArgumentError(
        "workspace bounds must satisfy min < max componentwise");
  }
  return Workspace(std::move(bounds), std::move(obstacles));
}

double Workspace::BoundaryClearance(const Point2& p) const {
  return std::min({p.x() - bounds_.min.x(), p.y() - bounds_.min.y(),
                   bounds_.max.x() - p.x(), bounds_.max.y() - p.y()});
}

absl::StatusOr<double> Workspace::DistanceToObstacles(const Point2& p) const {
  if (!p.allFinite() || !bounds_.Contains(p)) {
    return absl::OutOfRangeError(absl::StrFormat(
        "point (%g, %g) is outside the workspace bounds", p.x(), p.y()));
  }
  return Clearance(p);
}

double Workspace::Clearance(const Point2& p) const {
  double best = std::max(BoundaryClearance(p), 0.0);
  for (const Polygon& obstacle : obstacles_) {
    if (obstacle.bounding_box().Distance(p) >= best) continue;
    if (obstacle.Contains(p)) return 0.0;
    best = std::min(best, obstacle.BoundaryDistance(p));
  }
  return best;
}

NearestFeature Workspace::Nearest(const Point2& p) const {
  NearestFeature nearest;
  nearest.distance = std::numeric_limits<double>::infinity();
  for (int o = 0; o < static_cast<int>(obstacles_.size()); ++o) {
    const Polygon& obstacle = obstacles_[o];
    if (obstacle.bounding_box().Distance(p) >= nearest.distance) continue;
    for (int e = 0; e < obstacle.num_edges(); ++e) {
      const Point2& a = obstacle.edge_start(e);
      const Point2& b = obstacle.edge_end(e);
      const Point2 c = ClosestPointOnSegment(p, a, b);
      const double dist = (p - c).norm();
      if (dist < nearest.distance) {
        nearest.distance = dist;
        nearest.obstacle = o;
        nearest.edge = e;
        nearest.closest = c;
        nearest.at_vertex = (c - a).norm() <= kGeometryTolerance ||
                            (c - b).norm() <= kGeometryTolerance;
        if (dist > kGeometryTolerance) {
          // Edge outward normal, or the vertex-to-point direction.
          nearest.away = (p - c) / dist;
        } else {
          const Point2 edge = b - a;
          nearest.away = Point2(edge.y(), -edge.x()).normalized();
        }
      }
    }
  }
  const double sides[4] = {p.x() - bounds_.min.x(), p.y() - bounds_.min.y(),
                           bounds_.max.x() - p.x(), bounds_.max.y() - p.y()};
  const Point2 inward[4] = {Point2(1, 0), Point2(0, 1), Point2(-1, 0),
                            Point2(0, -1)};
  for (int s = 0; s < 4; ++s) {
    if (sides[s] < nearest.distance) {
      nearest.distance = sides[s];
      nearest.obstacle = -1;
      nearest.edge = s;
      nearest.at_vertex = false;
      nearest.closest = p - sides[s] * inward[s];
      nearest.away = inward[s];
    }
  }
  for (const Polygon& obstacle : obstacles_) {
    if (obstacle.Contains(p)) {
      nearest.distance = 0.0;
      break;
    }
  }
  return nearest;
}

bool Workspace::PointInCollision(const Point2& p) const {
  if (!p.allFinite() || BoundaryClearance(p) <= kGeometryTolerance) {
    return true;
  }
  for (const Polygon& obstacle : obstacles_) {
    if (obstacle.Contains(p)) return true;
  }
  return false;
}

bool Workspace::SegmentInCollision(const Point2& a, const Point2& b) const {
  // The bounds are convex, so checking the endpoints suffices for them.
  if (PointInCollision(a) || PointInCollision(b)) return true;
  AlignedBox seg_box{a.cwiseMin(b), a.cwiseMax(b)};
  for (const Polygon& obstacle : obstacles_) {
    const AlignedBox& box = obstacle.bounding_box();
    if (seg_box.max.x() < box.min.x() - kGeometryTolerance ||
        seg_box.min.x() > box.max.x() + kGeometryTolerance ||
        seg_box.max.y() < box.min.y() - kGeometryTolerance ||
        seg_box.min.y() > box.max.y() + kGeometryTolerance) {
      continue;
    }
    for (int e = 0; e < obstacle.num_edges(); ++e) {
      if (SegmentsIntersect(a, b, obstacle.edge_start(e), obstacle.edge_end(e))) {
        return true;
      }
    }
  }
  return false;
}

bool Workspace::DiskInCollision(const Point2& center, double radius) const {
  if (BoundaryClearance(center) <= radius) return true;
  for (const Polygon& obstacle : obstacles_) {
    if (obstacle.bounding_box().Distance(center) > radius) continue;
    if (obstacle.Contains(center)) return true;
    for (int e = 0; e < obstacle.num_edges(); ++e) {
      if (PointSegmentDistance(center, obstacle.edge_start(e),
                               obstacle.edge_end(e)) <= radius) {
        return true;
      }
    }
  }
  return false;
}

absl::StatusOr<Point2> Workspace::ProjectToFree(const Point2& p,
                                                double margin) const {
  if (!p.allFinite()) return absl::InvalidArgumentError("point is not finite");
  const Point2 lo = bounds_.min + Point2::Constant(margin);
  const Point2 hi = bounds_.max - Point2::Constant(margin);
  Point2 q = p.cwiseMax(lo).cwiseMin(hi);
  for (int round = 0; round < kMaxProjectionRounds; ++round) {
    if (!PointInCollision(q)) return q;
    const Polygon* inside = nullptr;
    for (const Polygon& obstacle : obstacles_) {
      if (obstacle.Contains(q)) {
        inside = &obstacle;
        break;
      }
    }
    if (inside == nullptr) break;
    double best = std::numeric_limits<double>::infinity();
    Point2 exit = q;
    for (int e = 0; e < inside->num_edges(); ++e) {
      const Point2& a = inside->edge_start(e);
      const Point2& b = inside->edge_end(e);
      const Point2 c = ClosestPointOnSegment(q, a, b);
      const double dist = (q - c).norm();
      if (dist < best) {
        best = dist;
        const Point2 edge = b - a;
        exit = c + margin * Point2(edge.y(), -edge.x()).normalized();
      }
    }
    q = exit.cwiseMax(lo).cwiseMin(hi);
  }
  return absl::NotFoundError(absl::StrFormat(
      "no free point found near (%g, %g)", p.x(), p.y()));
}

}  // namespace ces
