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

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "gtest/gtest.h"

namespace ces {
namespace {

constexpr double kTol = 1e-6;

Workspace MakeWorkspace(std::vector<Polygon> obstacles) {
  return *Workspace::Create({Point2(-50, -50), Point2(50, 50)},
                            std::move(obstacles));
}

// Half-plane {x >= 1} clipped to the workspace.
Workspace HalfPlane() {
  return MakeWorkspace({Polygon::Rectangle(Point2(1, -49), Point2(49, 49))});
}

Workspace Corridor(double width) {
  return MakeWorkspace(
      {Polygon::Rectangle(Point2(-40, 0.5 * width), Point2(40, 40)),
       Polygon::Rectangle(Point2(-40, -40), Point2(40, -0.5 * width))});
}

TEST(GenerateBubbleTest, CappedFarFromObstacles) {
  const Workspace w = MakeWorkspace({});
  absl::StatusOr<Bubble> b = GenerateBubble(Point2(1, 2), w, {1.0, 10.0});
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(b->center, Point2(1, 2));
  EXPECT_EQ(b->radius, 10.0);
}

TEST(GenerateBubbleTest, RadiusEqualsClearanceAndBisection) {
  const Workspace w =
      MakeWorkspace({Polygon::Rectangle(Point2(2, -1), Point2(3, 1))});
  const BubbleParams params{1.0, 10.0};
  absl::StatusOr<Bubble> b = GenerateBubble(Point2(0, 0), w, params);
  ASSERT_TRUE(b.ok());
  EXPECT_DOUBLE_EQ(b->radius, 2.0);
  absl::StatusOr<Bubble> bisected =
      GenerateBubbleByBisection(Point2(0, 0), w, params);
  ASSERT_TRUE(bisected.ok());
  EXPECT_NEAR(bisected->radius, 2.0, 1e-6);
}

TEST(GenerateBubbleTest, CenterInCollisionFails) {
  const Workspace w =
      MakeWorkspace({Polygon::Rectangle(Point2(2, -1), Point2(3, 1))});
  EXPECT_FALSE(GenerateBubble(Point2(2.5, 0), w, {1.0, 10.0}).ok());
}

TEST(TranslateBubbleTest, HalfPlaneMovesAlongNormal) {
  const Workspace w = HalfPlane();
  const Bubble b = TranslateBubble(Point2(0.6, 0), 0.4, w, {1.0, 10.0});
  EXPECT_NEAR(b.center.x(), 0.0, kTol);
  EXPECT_NEAR(b.center.y(), 0.0, 1e-12);
  EXPECT_NEAR(b.radius, 1.0, kTol);
  EXPECT_GE(w.Clearance(b.center), b.radius - 1e-9);
}

TEST(TranslateBubbleTest, NarrowCorridorKeepsBestOnRay) {
  const Workspace w = Corridor(1.2);
  const Bubble b = TranslateBubble(Point2(0, 0), 0.6, w, {1.0, 10.0});
  // Oracle: dense sampling of the clearance along the normal ray.
  const NearestFeature f = w.Nearest(Point2(0, 0));
  double best = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double t = 10.0 * i / 100000;
    const Point2 q = t * f.away;
    if (!w.bounds().Contains(q)) break;
    best = std::max(best, w.Clearance(q));
  }
  EXPECT_NEAR(best, 0.6, 1e-12);
  EXPECT_NEAR(b.radius, best, kTol);
  EXPECT_GE(w.Clearance(b.center), b.radius - 1e-9);
}

TEST(TranslateBubbleTest, VertexNearestMovesAwayFromVertex) {
  const Workspace w =
      MakeWorkspace({Polygon::Rectangle(Point2(0, 0), Point2(5, 5))});
  const Point2 a(-0.3, -0.4);
  const Bubble b = TranslateBubble(a, 0.5, w, {1.0, 10.0});
  const Point2 dir = (b.center - a).normalized();
  EXPECT_NEAR(dir.x(), -0.6, 1e-9);
  EXPECT_NEAR(dir.y(), -0.8, 1e-9);
  EXPECT_NEAR(b.radius, 1.0, kTol);
}

TEST(GenerateBubblesTest, ObstacleFreeUsesUpperRadius) {
  const Workspace w = MakeWorkspace({});
  std::vector<Point2> path;
  for (int i = 0; i <= 40; ++i) path.emplace_back(-20.0 + i, 0.0);
  absl::StatusOr<BubbleSequence> seq = GenerateBubbles(path, w, {1.0, 10.0});
  ASSERT_TRUE(seq.ok());
  ASSERT_EQ(seq->size(), 39);
  for (const Bubble& b : seq->interior()) EXPECT_EQ(b.radius, 10.0);
  // Waypoints within 5 m of the last fresh center share its bubble.
  EXPECT_EQ(seq->at(1).center, path[1]);
  EXPECT_TRUE(seq->reused(2));
  EXPECT_EQ(seq->at(5).center, path[1]);
  EXPECT_EQ(seq->at(6).center, path[6]);
}

TEST(GenerateBubblesTest, CloseWaypointReusesBubble) {
  // The first interior waypoint sits exactly 1 m from the wall.
  const Workspace w = HalfPlane();
  const std::vector<Point2> path = {Point2(0, 1), Point2(0, 0),
                                    Point2(0, -0.3), Point2(0, -1)};
  absl::StatusOr<BubbleSequence> seq = GenerateBubbles(path, w, {1.0, 10.0});
  ASSERT_TRUE(seq.ok());
  EXPECT_DOUBLE_EQ(seq->at(1).radius, 1.0);
  EXPECT_EQ(seq->at(2), seq->at(1));
}

TEST(GenerateBubblesTest, TranslatesSmallBubbleAwayFromWall) {
  const Workspace w = HalfPlane();
  const std::vector<Point2> path = {Point2(0.6, 5), Point2(0.6, 0),
                                    Point2(0.6, -5)};
  absl::StatusOr<BubbleSequence> seq = GenerateBubbles(path, w, {1.0, 10.0});
  ASSERT_TRUE(seq.ok());
  EXPECT_NEAR(seq->at(1).radius, 1.0, kTol);
  EXPECT_NEAR(1.0 - seq->at(1).center.x(), 1.0, kTol);
}

TEST(GenerateBubblesTest, CollidingWaypointNamesIndex) {
  const Workspace w = HalfPlane();
  const std::vector<Point2> path = {Point2(0, 0), Point2(0, 1), Point2(2, 2),
                                    Point2(0, 3)};
  absl::StatusOr<BubbleSequence> seq = GenerateBubbles(path, w, {1.0, 10.0});
  ASSERT_FALSE(seq.ok());
  EXPECT_NE(seq.status().message().find("waypoint 2"), std::string::npos);
}

TEST(GenerateBubblesTest, RejectsBadParams) {
  const Workspace w = MakeWorkspace({});
  EXPECT_FALSE(
      GenerateBubbles({Point2(0, 0), Point2(1, 0), Point2(2, 0)}, w, {2, 1})
          .ok());
}

TEST(GenerateBubblesTest, RandomScenesSatisfyInvariants) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> pos(-45, 40);
  std::uniform_real_distribution<double> size(2, 8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Polygon> obstacles;
    for (int i = 0; i < 25; ++i) {
      const Point2 lo(pos(rng), pos(rng));
      obstacles.push_back(
          Polygon::Rectangle(lo, lo + Point2(size(rng), size(rng))));
    }
    const Workspace w = MakeWorkspace(std::move(obstacles));
    // Random walk through free space.
    std::vector<Point2> path;
    std::uniform_real_distribution<double> ang(0, 2 * M_PI);
    Point2 p(pos(rng), pos(rng));
    while (w.PointInCollision(p)) p = Point2(pos(rng), pos(rng));
    path.push_back(p);
    while (path.size() < 120) {
      const double a = ang(rng);
      const Point2 q = p + 0.4 * Point2(std::cos(a), std::sin(a));
      if (w.SegmentInCollision(p, q)) continue;
      path.push_back(q);
      p = q;
    }
    const BubbleParams params{1.0, 10.0};
    absl::StatusOr<BubbleSequence> seq = GenerateBubbles(path, w, params);
    ASSERT_TRUE(seq.ok()) << seq.status();
    absl::StatusOr<BubbleSequence> again = GenerateBubbles(path, w, params);
    ASSERT_TRUE(again.ok());
    for (int i = 1; i <= seq->size(); ++i) {
      const Bubble& b = seq->at(i);
      EXPECT_GT(b.radius, 0.0);
      EXPECT_LE(b.radius, params.upper_radius);
      EXPECT_GE(w.Clearance(b.center), b.radius - 1e-6);
      EXPECT_EQ(b, again->at(i));
      if (seq->reused(i)) {
        EXPECT_LT((path[i] - b.center).norm(), 0.5 * b.radius);
      } else if (b.center == path[i]) {
        EXPECT_TRUE(b.Contains(path[i]));
      }
    }
  }
}

TEST(BubblesCsvTest, WritesHeaderAndRows) {
  const BubbleSequence seq({Bubble{Point2(1, 2), 3}, Bubble{Point2(4, 5), 6}});
  std::ostringstream out;
  WriteBubblesCsv(seq, out);
  EXPECT_EQ(out.str(), "index,center_x,center_y,radius\n1,1,2,3\n2,4,5,6\n");
}

}  // namespace
}  // namespace ces
