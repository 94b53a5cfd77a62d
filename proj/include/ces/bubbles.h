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

#ifndef CES_BUBBLES_H_
#define CES_BUBBLES_H_

#include <ostream>
#include <vector>

#include "absl/status/statusor.h"
#include "ces/geometry.h"

namespace ces {

// Collision-free disk {x : |x - center| <= radius}.
struct Bubble {
  Point2 center = Point2::Zero();
  double radius = 0.0;

  bool Contains(const Point2& p, double tolerance = 0.0) const {
    return (p - center).norm() <= radius + tolerance;
  }
  bool operator==(const Bubble& other) const {
    return center == other.center && radius == other.radius;
  }
};

struct BubbleParams {
  // Radius the translation step tries to reach.
  double lower_radius = 1.0;
  // Cap on every bubble radius.
  double upper_radius = 10.0;
};

absl::Status ValidateBubbleParams(const BubbleParams& params);

// One bubble per interior waypoint 1..n-2 of an n-waypoint path; the two
// endpoints carry none.
class BubbleSequence {
 public:
  BubbleSequence() = default;
  explicit BubbleSequence(std::vector<Bubble> interior)
      : bubbles_(std::move(interior)) {}

  // Bubble of waypoint `index`, 1 <= index <= size().
  const Bubble& at(int index) const { return bubbles_.at(index - 1); }
  int size() const { return static_cast<int>(bubbles_.size()); }
  const std::vector<Bubble>& interior() const { return bubbles_; }
  // Whether bubble `index` was copied from its predecessor.
  bool reused(int index) const { return index > 1 && at(index) == at(index - 1); }

 private:
  std::vector<Bubble> bubbles_;
};

// Largest collision-free bubble centered at `p`, capped at the upper radius.
absl::StatusOr<Bubble> GenerateBubble(const Point2& p, const Workspace& w,
                                      const BubbleParams& params);

// Same radius as GenerateBubble, found by bisection on the disk collision
// predicate to `tolerance`. Used for polygons without a distance query.
absl::StatusOr<Bubble> GenerateBubbleByBisection(const Point2& p,
                                                 const Workspace& w,
                                                 const BubbleParams& params,
                                                 double tolerance = 1e-6);

// Moves a small bubble away from its nearest obstacle feature until the lower
// radius fits, or returns the largest bubble found along that ray.
Bubble TranslateBubble(const Point2& center, double radius, const Workspace& w,
                       const BubbleParams& params);

// Bubble generation over a full waypoint sequence. Waypoints close to the
// previous center reuse its bubble.
absl::StatusOr<BubbleSequence> GenerateBubbles(
    const std::vector<Point2>& waypoints, const Workspace& w,
    const BubbleParams& params);

// CSV with columns index,center_x,center_y,radius.
void WriteBubblesCsv(const BubbleSequence& bubbles, std::ostream& out);

}  // namespace ces

#endif  // CES_BUBBLES_H_
