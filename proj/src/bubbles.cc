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

#include "ces/bubbles.h"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ces {
namespace {

// Scan resolution along the translation ray, relative to the lower radius.
constexpr double kScanStepFraction = 1e-3;
constexpr double kBisectionTolerance = 1e-6;
// Reuse threshold relative to the previous bubble radius.
constexpr double kReuseFraction = 0.5;

}  // namespace

absl::Status ValidateBubbleParams(const BubbleParams& params) {
  if (!(params.lower_radius > 0.0) ||
      !(params.upper_radius >= params.lower_radius)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "bubble radii must satisfy 0 < r_l <= r_u, got r_l=%g r_u=%g",
        params.lower_radius, params.upper_radius));
  }
  return absl::OkStatus();
}

absl::StatusOr<Bubble> GenerateBubble(const Point2& p, const Workspace& w,
                                      const BubbleParams& params) {
  if (w.PointInCollision(p)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "bubble center (%g, %g) is in collision", p.x(), p.y()));
  }
  return Bubble{p, std::min(w.Clearance(p), params.upper_radius)};
}

absl::StatusOr<Bubble> GenerateBubbleByBisection(const Point2& p,
                                                 const Workspace& w,
                                                 const BubbleParams& params,
                                                 double tolerance) {
  if (w.PointInCollision(p)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "bubble center (%g, %g) is in collision", p.x(), p.y()));
  }
  if (!w.DiskInCollision(p, params.upper_radius)) {
    return Bubble{p, params.upper_radius};
  }
  double lo = 0.0;
  double hi = params.upper_radius;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (w.DiskInCollision(p, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return Bubble{p, lo};
}

Bubble TranslateBubble(const Point2& center, double radius, const Workspace& w,
                       const BubbleParams& params) {
  const NearestFeature feature = w.Nearest(center);
  const Point2 dir = feature.away;
  const double step = kScanStepFraction * params.lower_radius;
  const AlignedBox& bounds = w.bounds();

  auto clearance_at = [&](double t) {
    const Point2 q = center + t * dir;
    if (!bounds.Contains(q)) return -1.0;
    return w.Clearance(q);
  };

  Bubble best{center, std::min(radius, params.upper_radius)};
  double best_t = 0.0;
  double prev_t = 0.0;
  for (double t = step; t <= params.upper_radius + 0.5 * step; t += step) {
    const double c = clearance_at(t);
    // The ray left the workspace; nothing further along it is usable.
    if (c < 0.0) break;
    if (c >= params.lower_radius) {
      double lo = prev_t;
      double hi = t;
      while (hi - lo > kBisectionTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (clearance_at(mid) >= params.lower_radius) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      const Point2 q = center + hi * dir;
      return Bubble{q, std::min(w.Clearance(q), params.upper_radius)};
    }
    if (c > best.radius) {
      best = Bubble{center + t * dir, c};
      best_t = t;
    }
    prev_t = t;
  }
  if (best_t > 0.0) {
    // Golden-section refinement of the clearance maximum around the best
    // sample.
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::max(0.0, best_t - step);
    double hi = best_t + step;
    while (hi - lo > kBisectionTolerance) {
      const double t1 = hi - phi * (hi - lo);
      const double t2 = lo + phi * (hi - lo);
      if (clearance_at(t1) < clearance_at(t2)) {
        lo = t1;
      } else {
        hi = t2;
      }
    }
    const double t = 0.5 * (lo + hi);
    const double c = clearance_at(t);
    if (c > best.radius) best = Bubble{center + t * dir, c};
  }
  best.radius = std::min(best.radius, params.upper_radius);
  return best;
}

absl::StatusOr<BubbleSequence> GenerateBubbles(
    const std::vector<Point2>& waypoints, const Workspace& w,
    const BubbleParams& params) {
  if (absl::Status s = ValidateBubbleParams(params); !s.ok()) return s;
  const int n = static_cast<int>(waypoints.size());
  std::vector<Bubble> bubbles;
  bubbles.reserve(std::max(n - 2, 0));
  for (int i = 1; i + 1 < n; ++i) {
    const Point2& p = waypoints[i];
    if (!bubbles.empty()) {
      const Bubble& prev = bubbles.back();
      if ((p - prev.center).norm() < kReuseFraction * prev.radius) {
        bubbles.push_back(prev);
        continue;
      }
    }
    absl::StatusOr<Bubble> bubble = GenerateBubble(p, w, params);
    if (!bubble.ok()) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "waypoint %d at (%g, %g) is in collision", i, p.x(), p.y()));
    }
    if (bubble->radius < params.lower_radius) {
      *bubble = TranslateBubble(bubble->center, bubble->radius, w, params);
    }
    bubbles.push_back(*bubble);
  }
  return BubbleSequence(std::move(bubbles));
}

void WriteBubblesCsv(const BubbleSequence& bubbles, std::ostream& out) {
  out << "index,center_x,center_y,radius\n";
  out << std::setprecision(17);
  for (int i = 1; i <= bubbles.size(); ++i) {
    const Bubble& b = bubbles.at(i);
    out << i << ',' << b.center.x() << ',' << b.center.y() << ',' << b.radius
        << '\n';
  }
}

}  // namespace ces
