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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace ces {
namespace {

Workspace MakeWorkspace(std::vector<Polygon> obstacles, double half = 50.0) {
  return *Workspace::Create({Point2(-half, -half), Point2(half, half)},
                            std::move(obstacles));
}

// Distance oracle: dense sampling of every obstacle boundary and the
// workspace frame.
double SampledDistance(const Point2& p, const Workspace& w, int samples) {
  double best = std::numeric_limits<double>::infinity();
  auto sample_edge = [&](const Point2& a, const Point2& b, int count) {
    for (int i = 0; i <= count; ++i) {
      const double t = static_cast<double>(i) / count;
      best = std::min(best, (p - (a + t * (b - a))).norm());
    }
  };
  for (const Polygon& o : w.obstacles()) {
    for (int e = 0; e < o.num_edges(); ++e) {
      sample_edge(o.edge_start(e), o.edge_end(e), samples / o.num_edges());
    }
  }
  const Point2 lo = w.bounds().min;
  const Point2 hi = w.bounds().max;
  best = std::min({best, p.x() - lo.x(), hi.x() - p.x(), p.y() - lo.y(),
                   hi.y() - p.y()});
  return best;
}

TEST(PolygonTest, RejectsDegenerateInput) {
  EXPECT_FALSE(Polygon::Create({Point2(0, 0), Point2(1, 0)}).ok());
  EXPECT_FALSE(
      Polygon::Create({Point2(0, 0), Point2(1, 0), Point2(2, 0)}).ok());
  // Bow tie.
  EXPECT_FALSE(Polygon::Create({Point2(0, 0), Point2(1, 1), Point2(1, 0),
                                Point2(0, 1)})
                   .ok());
}

TEST(PolygonTest, ReordersClockwiseInput) {
  absl::StatusOr<Polygon> poly = Polygon::Create(
      {Point2(0, 0), Point2(0, 1), Point2(1, 1), Point2(1, 0)});
  ASSERT_TRUE(poly.ok());
  EXPECT_NEAR(poly->Area(), 1.0, 1e-15);
  EXPECT_TRUE(poly->Centroid().isApprox(Point2(0.5, 0.5)));
}

TEST(WorkspaceTest, RejectsInvertedBounds) {
  EXPECT_FALSE(Workspace::Create({Point2(1, 0), Point2(0, 1)}, {}).ok());
}

TEST(DistanceTest, RectangleAtTwoMeters) {
  const Workspace w =
      MakeWorkspace({Polygon::Rectangle(Point2(2, -1), Point2(3, 1))});
  const Point2 p(0, 0);
  const double oracle = SampledDistance(p, w, 10000);
  EXPECT_NEAR(oracle, 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(*w.DistanceToObstacles(p), 2.0);
}

TEST(DistanceTest, EmptyWorkspaceUsesBoundary) {
  const Workspace w = MakeWorkspace({});
  EXPECT_DOUBLE_EQ(*w.DistanceToObstacles(Point2(0, 0)), 50.0);
}

TEST(DistanceTest, InsideObstacleIsZero) {
  const Workspace w =
      MakeWorkspace({Polygon::Rectangle(Point2(2, -1), Point2(3, 1))});
  EXPECT_EQ(*w.DistanceToObstacles(Point2(2.5, 0.2)), 0.0);
}

TEST(DistanceTest, OutOfBoundsIsError) {
  const Workspace w = MakeWorkspace({});
  EXPECT_EQ(w.DistanceToObstacles(Point2(60, 0)).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(CollisionTest, PointCases) {
  const Polygon rect = Polygon::Rectangle(Point2(2, -1), Point2(3, 1));
  const Workspace w = MakeWorkspace({rect});
  EXPECT_TRUE(w.PointInCollision(rect.Centroid()));
  EXPECT_FALSE(w.PointInCollision(Point2(0, 0)));
  // Closed obstacles: the edge itself collides.
  EXPECT_TRUE(w.PointInCollision(Point2(2, 0.3)));
  EXPECT_TRUE(w.PointInCollision(Point2(3, 1)));
  EXPECT_TRUE(w.PointInCollision(Point2(51, 0)));
}

TEST(CollisionTest, SegmentCases) {
  const Workspace w =
      MakeWorkspace({Polygon::Rectangle(Point2(2, -1), Point2(3, 1))});
  EXPECT_FALSE(w.SegmentInCollision(Point2(-1, 0), Point2(0.5, 0.5)));
  EXPECT_TRUE(w.SegmentInCollision(Point2(1, -2), Point2(4, 2)));
  // Grazes the vertex (2, 1) exactly.
  EXPECT_TRUE(w.SegmentInCollision(Point2(1, 2), Point2(3, 0)));
  EXPECT_TRUE(w.SegmentInCollision(Point2(1, 1), Point2(4, 1)));
  EXPECT_FALSE(w.SegmentInCollision(Point2(1, 1.001), Point2(4, 1.001)));
  EXPECT_TRUE(w.SegmentInCollision(Point2(0, 0), Point2(0, 60)));
}

TEST(CollisionTest, SegmentMatchesEdgeIntersectionOracle) {
  // Oracle: brute-force pairwise edge tests plus endpoint containment.
  const Polygon tri =
      *Polygon::Create({Point2(0, 0), Point2(4, 1), Point2(1, 3)});
  const Workspace w = MakeWorkspace({tri}, 10.0);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-5, 6);
  for (int trial = 0; trial < 2000; ++trial) {
    const Point2 a(u(rng), u(rng));
    const Point2 b(u(rng), u(rng));
    bool expected = tri.Contains(a) || tri.Contains(b);
    for (int e = 0; e < 3; ++e) {
      expected |= SegmentsIntersect(a, b, tri.edge_start(e), tri.edge_end(e));
    }
    EXPECT_EQ(w.SegmentInCollision(a, b), expected);
  }
}

class RandomWorkspaceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> pos(-20, 20);
    std::uniform_real_distribution<double> size(1, 6);
    std::vector<Polygon> obstacles;
    for (int i = 0; i < 12; ++i) {
      const Point2 lo(pos(rng), pos(rng));
      obstacles.push_back(
          Polygon::Rectangle(lo, lo + Point2(size(rng), size(rng))));
    }
    obstacles.push_back(*Polygon::Create(
        {Point2(-5, -24), Point2(3, -22), Point2(0, -18), Point2(-1, -21)}));
    workspace_ = std::make_unique<Workspace>(
        MakeWorkspace(std::move(obstacles), 25.0));
  }

  std::unique_ptr<Workspace> workspace_;
};

TEST_F(RandomWorkspaceTest, DistanceMatchesSamplingOracle) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-24.9, 24.9);
  for (int i = 0; i < 1000; ++i) {
    const Point2 p(u(rng), u(rng));
    const double d = *workspace_->DistanceToObstacles(p);
    if (d == 0.0) continue;
    const double oracle = SampledDistance(p, *workspace_, 4000);
    // Sampling overestimates by at most half the sample spacing.
    EXPECT_LE(d, oracle + 1e-9);
    EXPECT_GE(d, oracle - 1e-2);
  }
}

TEST_F(RandomWorkspaceTest, FreePointsHavePositiveClearance) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-25, 25);
  for (int i = 0; i < 2000; ++i) {
    const Point2 p(u(rng), u(rng));
    if (!workspace_->PointInCollision(p)) {
      EXPECT_GT(*workspace_->DistanceToObstacles(p), 0.0);
    }
    EXPECT_EQ(workspace_->SegmentInCollision(p, p),
              workspace_->PointInCollision(p));
  }
}

TEST_F(RandomWorkspaceTest, DistanceIsOneLipschitz) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-24.9, 24.9);
  for (int i = 0; i < 2000; ++i) {
    const Point2 p(u(rng), u(rng));
    const Point2 q(u(rng), u(rng));
    EXPECT_LE(std::abs(workspace_->Clearance(p) - workspace_->Clearance(q)),
              (p - q).norm() + 1e-12);
  }
}

TEST_F(RandomWorkspaceTest, NearestFeatureRealizesClearance) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-24.9, 24.9);
  for (int i = 0; i < 500; ++i) {
    const Point2 p(u(rng), u(rng));
    if (workspace_->PointInCollision(p)) continue;
    const NearestFeature f = workspace_->Nearest(p);
    EXPECT_NEAR(f.distance, workspace_->Clearance(p), 1e-12);
    EXPECT_NEAR((p - f.closest).norm(), f.distance, 1e-9);
    EXPECT_NEAR(f.away.norm(), 1.0, 1e-12);
  }
}

TEST(ProjectToFreeTest, LeavesObstacleThroughNearestEdge) {
  const Workspace w =
      MakeWorkspace({Polygon::Rectangle(Point2(2, -1), Point2(3, 1))});
  absl::StatusOr<Point2> q = w.ProjectToFree(Point2(2.2, 0.0), 1e-3);
  ASSERT_TRUE(q.ok());
  EXPECT_NEAR(q->x(), 2.0 - 1e-3, 1e-12);
  EXPECT_FALSE(w.PointInCollision(*q));
  EXPECT_EQ(*w.ProjectToFree(Point2(0, 0), 1e-3), Point2(0, 0));
}

}  // namespace
}  // namespace ces
