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

#include "ces/scenarios.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"

namespace ces {
namespace {

using Json = nlohmann::json;

constexpr uint64_t kReseedStride = 0x9E3779B97F4A7C15ULL;
constexpr int kMaxConsecutiveRejects = 100000;
constexpr double kSampleStep = 0.1;
constexpr double kArcStep = 0.05;
constexpr double kFilletShrink = 0.7;
constexpr double kMinFilletRadius = 1e-2;
constexpr double kEndLegShare = 0.9;
constexpr double kCornerShiftStep = 0.25;

double Dist(const Point2& a, const Point2& b) { return (b - a).norm(); }

// Occupancy grid over the workspace bounds.
class Grid {
 public:
  Grid(const Workspace& w, double cell, double inflation)
      : origin_(w.bounds().min), cell_(cell) {
    const Point2 size = w.bounds().max - w.bounds().min;
    nx_ = std::max(1, static_cast<int>(std::ceil(size.x() / cell)));
    ny_ = std::max(1, static_cast<int>(std::ceil(size.y() / cell)));
    free_.resize(static_cast<size_t>(nx_) * ny_);
    for (int j = 0; j < ny_; ++j) {
      for (int i = 0; i < nx_; ++i) {
        const Point2 c = Center(i, j);
        free_[Index(i, j)] =
            w.bounds().Contains(c) && w.Clearance(c) >= inflation;
      }
    }
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int Index(int i, int j) const { return j * nx_ + i; }
  Point2 Center(int i, int j) const {
    return origin_ + cell_ * Point2(i + 0.5, j + 0.5);
  }
  Point2 Center(int index) const { return Center(index % nx_, index / nx_); }
  bool Free(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx_ && j < ny_ && free_[Index(i, j)];
  }
  std::pair<int, int> CellOf(const Point2& p) const {
    const Point2 q = (p - origin_) / cell_;
    return {std::clamp(static_cast<int>(std::floor(q.x())), 0, nx_ - 1),
            std::clamp(static_cast<int>(std::floor(q.y())), 0, ny_ - 1)};
  }

 private:
  Point2 origin_;
  double cell_;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<char> free_;
};

// 8-connected A* without corner cutting; ties broken by cell index.
absl::StatusOr<std::vector<Point2>> GridPath(const Workspace& w,
                                             const Point2& start,
                                             const Point2& goal, double cell,
                                             double inflation,
                                             PlannerStats* stats) {
  const Grid grid(w, cell, inflation);
  const auto [si, sj] = grid.CellOf(start);
  const auto [gi, gj] = grid.CellOf(goal);
  if (!grid.Free(si, sj)) {
    return absl::NotFoundError("start cell is blocked on the planner grid");
  }
  if (!grid.Free(gi, gj)) {
    return absl::NotFoundError(
        "goal unreachable: goal cell is blocked on the planner grid");
  }
  const int n = grid.nx() * grid.ny();
  const int s = grid.Index(si, sj);
  const int g = grid.Index(gi, gj);
  std::vector<double> cost(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  std::vector<char> closed(n, 0);
  const auto heuristic = [&](int i, int j) {
    const double dx = std::abs(i - gi);
    const double dy = std::abs(j - gj);
    return std::max(dx, dy) + (std::numbers::sqrt2 - 1.0) * std::min(dx, dy);
  };
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  cost[s] = 0.0;
  open.push({heuristic(si, sj), s});
  int expanded = 0;
  while (!open.empty()) {
    const int cur = open.top().second;
    open.pop();
    if (closed[cur]) continue;
    closed[cur] = 1;
    ++expanded;
    if (cur == g) break;
    const int ci = cur % grid.nx();
    const int cj = cur / grid.nx();
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        const int ni = ci + di;
        const int nj = cj + dj;
        if (!grid.Free(ni, nj)) continue;
        if (di != 0 && dj != 0 &&
            (!grid.Free(ci + di, cj) || !grid.Free(ci, cj + dj))) {
          continue;
        }
        const int next = grid.Index(ni, nj);
        const double c =
            cost[cur] + (di != 0 && dj != 0 ? std::numbers::sqrt2 : 1.0);
        if (c < cost[next]) {
          cost[next] = c;
          parent[next] = cur;
          open.push({c + heuristic(ni, nj), next});
        }
      }
    }
  }
  if (stats != nullptr) stats->expanded = expanded;
  if (!closed[g]) {
    return absl::NotFoundError(
        "goal unreachable: no path on the planner grid");
  }
  std::vector<int> cells;
  for (int c = g; c != -1; c = parent[c]) cells.push_back(c);
  std::reverse(cells.begin(), cells.end());
  std::vector<Point2> path = {start};
  for (size_t k = 1; k + 1 < cells.size(); ++k) {
    path.push_back(grid.Center(cells[k]));
  }
  path.push_back(goal);
  if (stats != nullptr) stats->grid_path_length = PolylineLength(path);
  return path;
}

double MinClearanceAlong(const Workspace& w, const Point2& a, const Point2& b) {
  const int samples = std::max(2, static_cast<int>(Dist(a, b) / kSampleStep) + 1);
  double out = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    out = std::min(out, w.Clearance(a + (b - a) * (static_cast<double>(i) /
                                                  (samples - 1))));
  }
  return out;
}

std::vector<Point2> Shortcut(const Workspace& w, const std::vector<Point2>& path,
                             double clearance) {
  const auto visible = [&](const Point2& a, const Point2& b) {
    const double need =
        std::min({clearance, w.Clearance(a), w.Clearance(b)});
    return !w.SegmentInCollision(a, b) && MinClearanceAlong(w, a, b) >= need;
  };
  std::vector<Point2> out = {path.front()};
  size_t i = 0;
  while (i + 1 < path.size()) {
    size_t j = i + 1;
    while (j + 1 < path.size() && visible(path[i], path[j + 1])) ++j;
    out.push_back(path[j]);
    i = j;
  }
  // Drop vertices whose neighbours see each other until none is left.
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t k = 1; k + 1 < out.size(); ++k) {
      if (visible(out[k - 1], out[k + 1])) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
      }
    }
  }
  return out;
}

// Points strictly after `from` up to and including `to` along the arc.
void AppendArc(const Point2& center, const Point2& from, const Point2& to,
               double sweep, std::vector<Point2>* out) {
  const Point2 r0 = from - center;
  const double radius = r0.norm();
  const double a0 = std::atan2(r0.y(), r0.x());
  const int steps =
      std::max(4, static_cast<int>(std::ceil(radius * std::abs(sweep) / kArcStep)));
  for (int i = 1; i < steps; ++i) {
    const double a = a0 + sweep * i / steps;
    out->push_back(center + radius * Point2(std::cos(a), std::sin(a)));
  }
  out->push_back(to);
}

struct Arc {
  double radius = 0.0;
  std::vector<Point2> points;
};

// Largest fillet radius up to `max_radius` whose arc at `vertex` keeps the
// clearance, trying geometrically shrinking radii. Empty arc if none fits.
Arc FitArc(const Workspace& w, const Point2& prev, const Point2& vertex,
           const Point2& next, double share_in, double share_out,
           double max_radius, double clearance) {
  const Point2 in = vertex - prev;
  const Point2 out = next - vertex;
  const Point2 u_in = in.normalized();
  const Point2 u_out = out.normalized();
  const double turn = std::atan2(Cross(u_in, u_out), u_in.dot(u_out));
  const double half_tan = std::tan(0.5 * std::abs(turn));
  const double avail =
      std::min(in.norm() * share_in, out.norm() * share_out);
  for (double r = std::min(max_radius, avail / half_tan); r >= kMinFilletRadius;
       r *= kFilletShrink) {
    const double t = r * half_tan;
    const Point2 t1 = vertex - t * u_in;
    const Point2 t2 = vertex + t * u_out;
    const Point2 normal =
        turn > 0.0 ? Point2(-u_in.y(), u_in.x()) : Point2(u_in.y(), -u_in.x());
    Arc arc{r, {t1}};
    AppendArc(t1 + r * normal, t1, t2, turn, &arc.points);
    if (std::all_of(arc.points.begin(), arc.points.end(),
                    [&](const Point2& p) { return w.Clearance(p) >= clearance; })) {
      return arc;
    }
  }
  return {};
}

bool IsCorner(const Point2& prev, const Point2& vertex, const Point2& next) {
  const Point2 u_in = (vertex - prev).normalized();
  const Point2 u_out = (next - vertex).normalized();
  return std::abs(std::atan2(Cross(u_in, u_out), u_in.dot(u_out))) >= 1e-6;
}

std::vector<Point2> Fillet(const Workspace& w, const std::vector<Point2>& path,
                           const GridPlannerOptions& options,
                           PlannerStats* stats) {
  if (path.size() < 3 || options.fillet_radius <= 0.0) return path;
  const size_t m = path.size();
  const auto share = [&](size_t leg_end) {
    return leg_end == 0 || leg_end == m - 1 ? kEndLegShare : 0.5;
  };
  // Move corners outward along their bisector until the minimum radius fits.
  std::vector<Point2> v = path;
  for (size_t k = 1; k + 1 < m && options.max_corner_shift > 0.0; ++k) {
    if (!IsCorner(v[k - 1], v[k], v[k + 1])) continue;
    const Point2 outward =
        ((v[k] - v[k - 1]).normalized() - (v[k + 1] - v[k]).normalized())
            .normalized();
    Point2 best = v[k];
    double best_radius = -1.0;
    for (double shift = 0.0; shift <= options.max_corner_shift + 1e-9;
         shift += kCornerShiftStep) {
      const Point2 p = v[k] + shift * outward;
      if (shift > 0.0 &&
          (w.Clearance(p) < options.fillet_clearance ||
           MinClearanceAlong(w, v[k - 1], p) < options.fillet_clearance ||
           MinClearanceAlong(w, p, v[k + 1]) < options.fillet_clearance)) {
        continue;
      }
      const Arc arc = FitArc(w, v[k - 1], p, v[k + 1], share(k - 1),
                             share(k + 1), options.fillet_radius,
                             options.fillet_clearance);
      if (arc.radius > best_radius) {
        best_radius = arc.radius;
        best = p;
      }
      if (best_radius >= options.fillet_min_radius) break;
    }
    v[k] = best;
  }
  std::vector<Point2> out = {v.front()};
  for (size_t k = 1; k + 1 < m; ++k) {
    if (!IsCorner(v[k - 1], v[k], v[k + 1])) continue;
    ++stats->corners;
    const Arc arc = FitArc(w, v[k - 1], v[k], v[k + 1], share(k - 1),
                           share(k + 1), options.fillet_radius,
                           options.fillet_clearance);
    if (arc.radius < options.fillet_min_radius) ++stats->tight_corners;
    if (arc.points.empty()) {
      out.push_back(v[k]);
    } else {
      out.insert(out.end(), arc.points.begin(), arc.points.end());
    }
  }
  out.push_back(v.back());
  // Drop duplicates left where tangent points meet.
  std::vector<Point2> dedup = {out.front()};
  for (size_t k = 1; k < out.size(); ++k) {
    if (Dist(out[k], dedup.back()) > 1e-9) dedup.push_back(out[k]);
  }
  return dedup;
}

absl::Status CheckReference(const Workspace& w,
                            const std::vector<Point2>& reference) {
  for (size_t k = 0; k < reference.size(); ++k) {
    if (w.PointInCollision(reference[k])) {
      return absl::InternalError(
          absl::StrFormat("generated waypoint %d is in collision", k));
    }
  }
  return absl::OkStatus();
}

// Vertical extent of `poly` at abscissa x, if any.
std::optional<std::pair<double, double>> VerticalExtent(const Polygon& poly,
                                                        double x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int e = 0; e < poly.num_edges(); ++e) {
    const Point2& a = poly.edge_start(e);
    const Point2& b = poly.edge_end(e);
    if (std::min(a.x(), b.x()) > x || std::max(a.x(), b.x()) < x) continue;
    if (a.x() == b.x()) {
      lo = std::min({lo, a.y(), b.y()});
      hi = std::max({hi, a.y(), b.y()});
      continue;
    }
    const double y = a.y() + (b.y() - a.y()) * (x - a.x()) / (b.x() - a.x());
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

VehicleParams LaneVehicle() {
  VehicleParams v;
  v.mass_kg = 1725.0;
  v.mu = 0.5;
  v.u_long_max_n = 0.3 * v.FrictionLimit();
  return v;
}

}  // namespace

double UnionArea(const std::vector<AlignedBox>& boxes) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const AlignedBox& b : boxes) {
    if (!(b.max.x() > b.min.x() && b.max.y() > b.min.y())) continue;
    xs.push_back(b.min.x());
    xs.push_back(b.max.x());
    ys.push_back(b.min.y());
    ys.push_back(b.max.y());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  double area = 0.0;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    const double cx = 0.5 * (xs[i] + xs[i + 1]);
    for (size_t j = 0; j + 1 < ys.size(); ++j) {
      const double cy = 0.5 * (ys[j] + ys[j + 1]);
      for (const AlignedBox& b : boxes) {
        if (cx > b.min.x() && cx < b.max.x() && cy > b.min.y() &&
            cy < b.max.y()) {
          area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
          break;
        }
      }
    }
  }
  return area;
}

absl::Status ValidateMazeSpec(const MazeSpec& spec) {
  if (!(spec.bounds.max.x() > spec.bounds.min.x() &&
        spec.bounds.max.y() > spec.bounds.min.y())) {
    return absl::InvalidArgumentError("maze bounds must have min < max");
  }
  if (!(spec.coverage >= 0.0 && spec.coverage < 0.6)) {
    return absl::InvalidArgumentError("maze coverage must lie in [0, 0.6)");
  }
  if (!(spec.coverage_tolerance > 0.0 && spec.coverage_tolerance < 1.0)) {
    return absl::InvalidArgumentError("coverage tolerance must lie in (0, 1)");
  }
  if (!(spec.min_side > 0.0 && spec.max_side >= spec.min_side)) {
    return absl::InvalidArgumentError("obstacle sides need 0 < min <= max");
  }
  if (!spec.bounds.Contains(spec.start) || !spec.bounds.Contains(spec.goal)) {
    return absl::InvalidArgumentError("start and goal must lie in the bounds");
  }
  if (spec.endpoint_clearance < 0.0 || spec.max_reseeds < 0) {
    return absl::InvalidArgumentError("negative clearance or reseed count");
  }
  return absl::OkStatus();
}

absl::StatusOr<Workspace> GenerateMaze(const MazeSpec& spec, uint64_t seed,
                                       MazeStats* stats) {
  if (absl::Status s = ValidateMazeSpec(spec); !s.ok()) return s;
  const double total = spec.bounds.Area();
  const double lo = spec.coverage * (1.0 - spec.coverage_tolerance) * total;
  const double hi = spec.coverage * (1.0 + spec.coverage_tolerance) * total;
  for (int attempt = 0; attempt <= spec.max_reseeds; ++attempt) {
    const uint64_t seed_k = seed + kReseedStride * static_cast<uint64_t>(attempt);
    std::mt19937_64 rng(seed_k);
    std::uniform_real_distribution<double> ux(spec.bounds.min.x(),
                                              spec.bounds.max.x());
    std::uniform_real_distribution<double> uy(spec.bounds.min.y(),
                                              spec.bounds.max.y());
    std::uniform_real_distribution<double> side(spec.min_side, spec.max_side);
    std::vector<AlignedBox> boxes;
    double area = 0.0;
    int rejects = 0;
    while (spec.coverage > 0.0 && area < lo && rejects < kMaxConsecutiveRejects) {
      const Point2 c(ux(rng), uy(rng));
      const Point2 half(0.5 * side(rng), 0.5 * side(rng));
      AlignedBox box{(c - half).cwiseMax(spec.bounds.min),
                     (c + half).cwiseMin(spec.bounds.max)};
      if (box.Distance(spec.start) < spec.endpoint_clearance ||
          box.Distance(spec.goal) < spec.endpoint_clearance) {
        ++rejects;
        continue;
      }
      std::vector<AlignedBox> overlap;
      for (const AlignedBox& b : boxes) {
        AlignedBox o{b.min.cwiseMax(box.min), b.max.cwiseMin(box.max)};
        if (o.max.x() > o.min.x() && o.max.y() > o.min.y()) overlap.push_back(o);
      }
      const double next = area + box.Area() - UnionArea(overlap);
      if (next > hi) {
        ++rejects;
        continue;
      }
      rejects = 0;
      area = next;
      boxes.push_back(box);
    }
    if (area < lo) continue;
    std::vector<Polygon> obstacles;
    for (const AlignedBox& b : boxes) {
      obstacles.push_back(Polygon::Rectangle(b.min, b.max));
    }
    absl::StatusOr<Workspace> w = Workspace::Create(spec.bounds, obstacles);
    if (!w.ok()) return w.status();
    const GridPlannerOptions grid;
    if (!GridPath(*w, spec.start, spec.goal, grid.cell,
                  std::max(grid.inflation, spec.path_clearance), nullptr)
             .ok()) {
      continue;
    }
    if (stats != nullptr) {
      stats->seed_used = seed_k;
      stats->reseeds = attempt;
      stats->coverage = area / total;
    }
    return w;
  }
  return absl::ResourceExhaustedError(absl::StrFormat(
      "maze generation failed after %d reseeds", spec.max_reseeds));
}

std::vector<Point2> ResampleToCount(const std::vector<Point2>& polyline,
                                    int count) {
  if (polyline.size() < 2 || count < 2) return polyline;
  std::vector<double> s = {0.0};
  for (size_t k = 0; k + 1 < polyline.size(); ++k) {
    s.push_back(s.back() + Dist(polyline[k], polyline[k + 1]));
  }
  const double length = s.back();
  std::vector<Point2> out;
  size_t seg = 0;
  for (int j = 0; j < count; ++j) {
    const double target = length * j / (count - 1);
    while (seg + 2 < s.size() && s[seg + 1] < target) ++seg;
    const double span = s[seg + 1] - s[seg];
    const double t =
        span > 0.0 ? std::clamp((target - s[seg]) / span, 0.0, 1.0) : 0.0;
    out.push_back(polyline[seg] + t * (polyline[seg + 1] - polyline[seg]));
  }
  out.front() = polyline.front();
  out.back() = polyline.back();
  return out;
}

std::vector<Point2> ResampleToSpacing(const std::vector<Point2>& polyline,
                                      double spacing) {
  const double length = PolylineLength(polyline);
  const int segments =
      std::max(1, static_cast<int>(std::lround(length / spacing)));
  return ResampleToCount(polyline, segments + 1);
}

absl::StatusOr<std::vector<Point2>> ReferenceFromGrid(
    const Workspace& w, const Point2& start, const Point2& goal,
    const GridPlannerOptions& options, PlannerStats* stats) {
  if (!(options.cell > 0.0) || options.inflation < 0.0 ||
      (options.num_points <= 0 && !(options.spacing > 0.0))) {
    return absl::InvalidArgumentError("invalid grid planner options");
  }
  if (w.PointInCollision(start) || w.PointInCollision(goal)) {
    return absl::InvalidArgumentError("start and goal must be collision-free");
  }
  PlannerStats local;
  PlannerStats* st = stats != nullptr ? stats : &local;
  absl::StatusOr<std::vector<Point2>> path;
  for (double level : options.clearance_levels) {
    if (level <= options.inflation) continue;
    path = GridPath(w, start, goal, options.cell, level, st);
    if (path.ok()) {
      st->clearance = level;
      break;
    }
  }
  if (!path.ok()) {
    path = GridPath(w, start, goal, options.cell, options.inflation, st);
    if (!path.ok()) return path.status();
    st->clearance = options.inflation;
  }
  std::vector<Point2> poly = *std::move(path);
  if (options.shortcut) poly = Shortcut(w, poly, options.shortcut_clearance);
  poly = Fillet(w, poly, options, st);
  std::vector<Point2> out = options.num_points > 0
                                ? ResampleToCount(poly, options.num_points)
                                : ResampleToSpacing(poly, options.spacing);
  if (absl::Status s = CheckReference(w, out); !s.ok()) return s;
  return out;
}

absl::StatusOr<std::vector<Point2>> CorridorCenterline(const Workspace& w,
                                                       double x0, double x1,
                                                       double station_spacing) {
  if (!(station_spacing > 0.0) || !(x1 > x0)) {
    return absl::InvalidArgumentError("invalid centerline stations");
  }
  const int stations =
      std::max(1, static_cast<int>(std::lround((x1 - x0) / station_spacing)));
  const double h = (x1 - x0) / stations;
  const double ymin = w.bounds().min.y();
  const double ymax = w.bounds().max.y();
  std::vector<Point2> out;
  for (int j = 0; j <= stations; ++j) {
    const double x = x0 + h * j;
    std::vector<std::pair<double, double>> blocked;
    for (const Polygon& poly : w.obstacles()) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (double xs : {x - h, x, x + h}) {
        if (auto e = VerticalExtent(poly, xs); e.has_value()) {
          lo = std::min(lo, e->first);
          hi = std::max(hi, e->second);
        }
      }
      if (lo <= hi) blocked.push_back({lo, hi});
    }
    std::sort(blocked.begin(), blocked.end());
    double best_lo = 0.0;
    double best_width = 0.0;
    double cursor = ymin;
    blocked.push_back({ymax, ymax});
    for (const auto& [lo, hi] : blocked) {
      const double top = std::min(lo, ymax);
      if (top - cursor > best_width) {
        best_width = top - cursor;
        best_lo = cursor;
      }
      cursor = std::max(cursor, hi);
    }
    if (best_width <= 0.0) {
      return absl::FailedPreconditionError(
          absl::StrFormat("corridor fully blocked at x = %g", x));
    }
    out.push_back(Point2(x, best_lo + 0.5 * best_width));
  }
  for (size_t k = 0; k + 1 < out.size(); ++k) {
    if (w.SegmentInCollision(out[k], out[k + 1])) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "centerline segment at x = %g collides", out[k].x()));
    }
  }
  return out;
}

LaneSpec DefaultLaneChange() {
  LaneSpec spec;
  spec.obstacles = {
      AlignedBox{Point2(12.0, 0.0), Point2(20.0, 4.0)},
      AlignedBox{Point2(30.0, 2.0), Point2(38.0, 6.0)},
  };
  return spec;
}

absl::StatusOr<GeneratedScenario> MazeScenario(const MazeSpec& spec,
                                               uint64_t seed, int num_points) {
  CesConfig config;
  // Corridors narrower than two minimum bubble radii leave the stretch
  // no room, so the maze must connect start and goal at that clearance.
  MazeSpec reachable = spec;
  reachable.path_clearance =
      std::max(spec.path_clearance, config.bubbles.lower_radius);
  MazeStats maze;
  absl::StatusOr<Workspace> w = GenerateMaze(reachable, seed, &maze);
  if (!w.ok()) return w.status();
  GridPlannerOptions options;
  options.num_points = num_points;
  options.fillet_radius = 40.0 * config.vehicle.r_min_m;
  options.fillet_min_radius = config.vehicle.r_min_m;
  options.max_corner_shift = 3.0;
  options.clearance_levels = {3.0, 2.5, 2.0, 1.5, 1.0};
  options.shortcut_clearance = config.bubbles.lower_radius;
  PlannerStats stats;
  absl::StatusOr<std::vector<Point2>> ref =
      ReferenceFromGrid(*w, spec.start, spec.goal, options, &stats);
  if (!ref.ok()) return ref.status();
  return GeneratedScenario{absl::StrFormat("maze-%d", seed), *std::move(w),
                           *std::move(ref), config, "maze", seed, stats};
}

absl::StatusOr<GeneratedScenario> LaneChangeScenario(const LaneSpec& spec) {
  if (!(spec.length > 2.0 * spec.end_margin) || !(spec.width > 0.0) ||
      !(spec.spacing > 0.0) || spec.end_margin <= 0.0) {
    return absl::InvalidArgumentError("invalid lane specification");
  }
  const AlignedBox bounds{Point2(0.0, 0.0), Point2(spec.length, spec.width)};
  std::vector<Polygon> obstacles;
  for (const AlignedBox& b : spec.obstacles) {
    obstacles.push_back(Polygon::Rectangle(b.min, b.max));
  }
  absl::StatusOr<Workspace> w = Workspace::Create(bounds, obstacles);
  if (!w.ok()) return w.status();
  absl::StatusOr<std::vector<Point2>> line =
      CorridorCenterline(*w, spec.end_margin, spec.length - spec.end_margin,
                         spec.station_spacing);
  if (!line.ok()) return line.status();
  std::vector<Point2> ref = ResampleToSpacing(*line, spec.spacing);
  if (absl::Status s = CheckReference(*w, ref); !s.ok()) return s;
  CesConfig config;
  config.vehicle = LaneVehicle();
  return GeneratedScenario{"lane-change", *std::move(w), std::move(ref),
                           config, "lane_change", 0, {}};
}

GeneratedScenario MooseTestScenario() {
  // S-shaped corridor of vertical width 3.5 m; the lower wall is the upper
  // wall rotated by 180 degrees about (22.5, 1.75).
  const AlignedBox bounds{Point2(-5.0, -1.75), Point2(50.0, 5.25)};
  std::vector<Polygon> walls = {
      *Polygon::Create({Point2(-5.0, 1.75), Point2(15.0, 1.75),
                        Point2(30.0, 5.25), Point2(-5.0, 5.25)}),
      *Polygon::Create({Point2(50.0, 1.75), Point2(30.0, 1.75),
                        Point2(15.0, -1.75), Point2(50.0, -1.75)}),
  };
  Workspace w = *Workspace::Create(bounds, walls);
  std::vector<Point2> line = *CorridorCenterline(w, -4.0, 49.0, 0.5);
  std::vector<Point2> ref = ResampleToSpacing(line, 0.5);
  CesConfig config;
  config.vehicle.r_min_m = 5.0;
  config.constant_speed_mode = true;
  config.constant_speed = 5.0;
  return GeneratedScenario{"moose", std::move(w), std::move(ref), config,
                           "moose", 0, {}};
}

namespace {

absl::Status CheckKeys(const Json& obj, std::initializer_list<const char*> keys,
                       const char* where) {
  if (!obj.is_object()) {
    return absl::InvalidArgumentError(absl::StrFormat("%s must be an object", where));
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) {
          return key == k;
        }) == keys.end()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown key '%s' in %s", key, where));
    }
  }
  return absl::OkStatus();
}

Point2 ToPoint(const Json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("points must be [x, y] pairs");
  }
  return Point2(j.at(0).get<double>(), j.at(1).get<double>());
}

std::vector<Point2> ToPoints(const Json& j) {
  std::vector<Point2> out;
  for (const Json& p : j) out.push_back(ToPoint(p));
  return out;
}

AlignedBox ToBox(const Json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw std::invalid_argument("boxes must be [xmin, ymin, xmax, ymax]");
  }
  return AlignedBox{Point2(j[0].get<double>(), j[1].get<double>()),
                    Point2(j[2].get<double>(), j[3].get<double>())};
}

Json FromPoint(const Point2& p) { return Json::array({p.x(), p.y()}); }

absl::StatusOr<Workspace> ParseWorkspace(const Json& j) {
  if (absl::Status s = CheckKeys(j, {"bounds", "obstacles"}, "workspace");
      !s.ok()) {
    return s;
  }
  const AlignedBox bounds = ToBox(j.at("bounds"));
  std::vector<Polygon> obstacles;
  if (j.contains("obstacles")) {
    for (const Json& poly : j.at("obstacles")) {
      absl::StatusOr<Polygon> p = Polygon::Create(ToPoints(poly));
      if (!p.ok()) return p.status();
      obstacles.push_back(*std::move(p));
    }
  }
  return Workspace::Create(bounds, std::move(obstacles));
}

absl::Status ParseVehicle(const Json& j, VehicleParams* v) {
  if (absl::Status s = CheckKeys(
          j, {"mass_kg", "mu", "g", "u_long_max_n", "r_min_m"}, "vehicle");
      !s.ok()) {
    return s;
  }
  v->mass_kg = j.value("mass_kg", v->mass_kg);
  v->mu = j.value("mu", v->mu);
  v->g = j.value("g", v->g);
  v->u_long_max_n = j.value("u_long_max_n", v->u_long_max_n);
  v->r_min_m = j.value("r_min_m", v->r_min_m);
  return ValidateVehicleParams(*v);
}

absl::Status ParseCes(const Json& j, CesConfig* c) {
  if (absl::Status s = CheckKeys(
          j,
          {"r_l", "r_u", "max_iterations", "timeout_s", "constant_speed",
           "constant_speed_value", "time_tolerance", "v_start", "v_end"},
          "ces");
      !s.ok()) {
    return s;
  }
  c->bubbles.lower_radius = j.value("r_l", c->bubbles.lower_radius);
  c->bubbles.upper_radius = j.value("r_u", c->bubbles.upper_radius);
  c->max_iterations = j.value("max_iterations", c->max_iterations);
  if (j.contains("timeout_s") && !j.at("timeout_s").is_null()) {
    c->timeout_s = j.at("timeout_s").get<double>();
  }
  c->constant_speed_mode = j.value("constant_speed", c->constant_speed_mode);
  c->constant_speed = j.value("constant_speed_value", c->constant_speed);
  c->time_tolerance = j.value("time_tolerance", c->time_tolerance);
  c->boundary.start = j.value("v_start", c->boundary.start);
  c->boundary.end = j.value("v_end", c->boundary.end);
  return ValidateCesConfig(*c);
}

absl::StatusOr<GeneratedScenario> FromGenerator(const Json& g) {
  const std::string type = g.at("type").get<std::string>();
  if (type == "maze") {
    if (absl::Status s = CheckKeys(
            g,
            {"type", "seed", "coverage", "min_side", "max_side", "bounds",
             "start", "goal", "num_points", "endpoint_clearance", "path_clearance"},
            "maze generator");
        !s.ok()) {
      return s;
    }
    MazeSpec spec;
    spec.coverage = g.value("coverage", spec.coverage);
    spec.min_side = g.value("min_side", spec.min_side);
    spec.max_side = g.value("max_side", spec.max_side);
    spec.endpoint_clearance =
        g.value("endpoint_clearance", spec.endpoint_clearance);
    spec.path_clearance = g.value("path_clearance", spec.path_clearance);
    if (g.contains("bounds")) spec.bounds = ToBox(g.at("bounds"));
    if (g.contains("start")) spec.start = ToPoint(g.at("start"));
    if (g.contains("goal")) spec.goal = ToPoint(g.at("goal"));
    return MazeScenario(spec, g.value("seed", uint64_t{0}),
                        g.value("num_points", 257));
  }
  if (type == "lane_change") {
    if (absl::Status s = CheckKeys(
            g,
            {"type", "length", "width", "obstacles", "station_spacing",
             "spacing", "end_margin", "seed"},
            "lane generator");
        !s.ok()) {
      return s;
    }
    LaneSpec spec = DefaultLaneChange();
    spec.length = g.value("length", spec.length);
    spec.width = g.value("width", spec.width);
    spec.station_spacing = g.value("station_spacing", spec.station_spacing);
    spec.spacing = g.value("spacing", spec.spacing);
    spec.end_margin = g.value("end_margin", spec.end_margin);
    if (g.contains("obstacles")) {
      spec.obstacles.clear();
      for (const Json& b : g.at("obstacles")) spec.obstacles.push_back(ToBox(b));
    }
    return LaneChangeScenario(spec);
  }
  if (type == "moose") {
    if (absl::Status s = CheckKeys(g, {"type", "seed"}, "moose generator");
        !s.ok()) {
      return s;
    }
    return MooseTestScenario();
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown generator type '%s'", type));
}

absl::StatusOr<GeneratedScenario> ParseDocument(const Json& doc,
                                                std::string id) {
  if (absl::Status s =
          CheckKeys(doc, {"id", "workspace", "vehicle", "reference", "ces"},
                    "scenario");
      !s.ok()) {
    return s;
  }
  if (!doc.contains("reference")) {
    return absl::InvalidArgumentError("scenario needs a 'reference'");
  }
  const Json& ref = doc.at("reference");
  if (absl::Status s = CheckKeys(ref, {"waypoints", "generator"}, "reference");
      !s.ok()) {
    return s;
  }
  if (ref.contains("waypoints") == ref.contains("generator")) {
    return absl::InvalidArgumentError(
        "reference needs exactly one of 'waypoints' and 'generator'");
  }
  absl::StatusOr<GeneratedScenario> out;
  if (ref.contains("generator")) {
    if (doc.contains("workspace")) {
      return absl::InvalidArgumentError(
          "'workspace' and a reference generator are exclusive");
    }
    out = FromGenerator(ref.at("generator"));
  } else {
    if (!doc.contains("workspace")) {
      return absl::InvalidArgumentError("explicit waypoints need a 'workspace'");
    }
    absl::StatusOr<Workspace> w = ParseWorkspace(doc.at("workspace"));
    if (!w.ok()) return w.status();
    out = GeneratedScenario{"", *std::move(w), ToPoints(ref.at("waypoints")),
                            CesConfig{}, "file", 0, {}};
  }
  if (!out.ok()) return out.status();
  out->id = doc.contains("id") ? doc.at("id").get<std::string>() : std::move(id);
  if (doc.contains("vehicle")) {
    if (absl::Status s = ParseVehicle(doc.at("vehicle"), &out->config.vehicle);
        !s.ok()) {
      return s;
    }
  }
  if (doc.contains("ces")) {
    if (absl::Status s = ParseCes(doc.at("ces"), &out->config); !s.ok()) {
      return s;
    }
  }
  return out;
}

}  // namespace

absl::StatusOr<GeneratedScenario> ParseScenario(std::string_view text,
                                                std::string id) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("malformed JSON at byte %d: %s", e.byte, e.what()));
  }
  try {
    return ParseDocument(doc, std::move(id));
  } catch (const std::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("invalid scenario: %s", e.what()));
  }
}

absl::StatusOr<GeneratedScenario> LoadScenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::InvalidArgumentError(absl::StrFormat("cannot open %s", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string id = path;
  if (size_t slash = id.find_last_of('/'); slash != std::string::npos) {
    id = id.substr(slash + 1);
  }
  if (size_t dot = id.rfind('.'); dot != std::string::npos && dot > 0) {
    id = id.substr(0, dot);
  }
  return ParseScenario(buffer.str(), id);
}

std::string ScenarioToJson(const GeneratedScenario& scenario) {
  const Workspace& w = scenario.workspace;
  Json obstacles = Json::array();
  for (const Polygon& p : w.obstacles()) {
    Json poly = Json::array();
    for (const Point2& v : p.vertices()) poly.push_back(FromPoint(v));
    obstacles.push_back(poly);
  }
  Json waypoints = Json::array();
  for (const Point2& p : scenario.reference) waypoints.push_back(FromPoint(p));
  const CesConfig& c = scenario.config;
  Json ces = {{"r_l", c.bubbles.lower_radius},
              {"r_u", c.bubbles.upper_radius},
              {"max_iterations", c.max_iterations},
              {"constant_speed", c.constant_speed_mode},
              {"constant_speed_value", c.constant_speed},
              {"time_tolerance", c.time_tolerance},
              {"v_start", c.boundary.start},
              {"v_end", c.boundary.end}};
  if (c.timeout_s.has_value()) ces["timeout_s"] = *c.timeout_s;
  const Json doc = {
      {"id", scenario.id},
      {"workspace",
       {{"bounds",
         {w.bounds().min.x(), w.bounds().min.y(), w.bounds().max.x(),
          w.bounds().max.y()}},
        {"obstacles", obstacles}}},
      {"vehicle",
       {{"mass_kg", c.vehicle.mass_kg},
        {"mu", c.vehicle.mu},
        {"g", c.vehicle.g},
        {"u_long_max_n", c.vehicle.u_long_max_n},
        {"r_min_m", c.vehicle.r_min_m}}},
      {"reference", {{"waypoints", waypoints}}},
      {"ces", ces},
  };
  return doc.dump(2);
}

}  // namespace ces
