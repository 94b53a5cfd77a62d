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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace ces {
namespace {

Workspace Box(double w, double h, std::vector<Polygon> obstacles = {}) {
  return *Workspace::Create({Point2(0, 0), Point2(w, h)}, std::move(obstacles));
}

// Area of the union by point sampling at cell centers; exact when every box
// coordinate is a multiple of the cell size.
double RasterArea(const std::vector<AlignedBox>& boxes, const AlignedBox& frame,
                  double cell) {
  double area = 0.0;
  for (double x = frame.min.x() + 0.5 * cell; x < frame.max.x(); x += cell) {
    for (double y = frame.min.y() + 0.5 * cell; y < frame.max.y(); y += cell) {
      for (const AlignedBox& b : boxes) {
        if (b.Contains(Point2(x, y))) {
          area += cell * cell;
          break;
        }
      }
    }
  }
  return area;
}

std::vector<AlignedBox> Boxes(const Workspace& w) {
  std::vector<AlignedBox> out;
  for (const Polygon& p : w.obstacles()) out.push_back(p.bounding_box());
  return out;
}

TEST(UnionAreaTest, Examples) {
  EXPECT_EQ(UnionArea({}), 0.0);
  const AlignedBox a{Point2(0, 0), Point2(2, 2)};
  const AlignedBox b{Point2(1, 1), Point2(3, 3)};
  const AlignedBox c{Point2(5, 5), Point2(6, 7)};
  const AlignedBox inner{Point2(0.5, 0.5), Point2(1, 1)};
  EXPECT_DOUBLE_EQ(UnionArea({a, b}), 7.0);
  EXPECT_DOUBLE_EQ(UnionArea({a, c}), 6.0);
  EXPECT_DOUBLE_EQ(UnionArea({a, inner}), 4.0);
  EXPECT_DOUBLE_EQ(UnionArea({a, a, a}), 4.0);
}

TEST(UnionAreaTest, MatchesRasterOracle) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> coord(0, 40);
  std::uniform_int_distribution<int> count(1, 12);
  const AlignedBox frame{Point2(0, 0), Point2(20, 20)};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<AlignedBox> boxes;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
      if (x0 == x1) ++x1;
      if (y0 == y1) ++y1;
      boxes.push_back({Point2(0.5 * std::min(x0, x1), 0.5 * std::min(y0, y1)),
                       Point2(0.5 * std::max(x0, x1), 0.5 * std::max(y0, y1))});
    }
    EXPECT_NEAR(UnionArea(boxes), RasterArea(boxes, frame, 0.5), 1e-9) << trial;
  }
}

TEST(MazeTest, ValidatesSpec) {
  EXPECT_TRUE(ValidateMazeSpec(MazeSpec()).ok());
  MazeSpec s;
  s.coverage = 0.7;
  EXPECT_FALSE(ValidateMazeSpec(s).ok());
  s = MazeSpec();
  s.min_side = 5.0;
  s.max_side = 4.0;
  EXPECT_FALSE(ValidateMazeSpec(s).ok());
  s = MazeSpec();
  s.goal = Point2(120, 5);
  EXPECT_FALSE(ValidateMazeSpec(s).ok());
  EXPECT_FALSE(GenerateMaze(s, 1).ok());
}

TEST(MazeTest, ZeroCoverageIsEmpty) {
  MazeSpec s;
  s.coverage = 0.0;
  const auto w = GenerateMaze(s, 42);
  ASSERT_TRUE(w.ok());
  EXPECT_TRUE(w->obstacles().empty());
}

TEST(MazeTest, CoverageEndpointsAndReachability) {
  const MazeSpec spec;
  for (uint64_t seed = 1000; seed < 1005; ++seed) {
    MazeStats stats;
    const auto w = GenerateMaze(spec, seed, &stats);
    ASSERT_TRUE(w.ok()) << w.status();
    const std::vector<AlignedBox> boxes = Boxes(*w);
    const double raster = RasterArea(boxes, spec.bounds, 0.25) / 1e4;
    EXPECT_NEAR(raster, stats.coverage, 0.01) << seed;
    EXPECT_GE(stats.coverage, 0.475) << seed;
    EXPECT_LE(stats.coverage, 0.525) << seed;
    for (const AlignedBox& b : boxes) {
      EXPECT_GE(b.Distance(spec.start), spec.endpoint_clearance);
      EXPECT_GE(b.Distance(spec.goal), spec.endpoint_clearance);
      EXPECT_LE(b.max.x() - b.min.x(), spec.max_side + 1e-12);
      EXPECT_LE(b.max.y() - b.min.y(), spec.max_side + 1e-12);
    }
    EXPECT_TRUE(ReferenceFromGrid(*w, spec.start, spec.goal,
                                  GridPlannerOptions())
                    .ok())
        << seed;
  }
}

TEST(MazeTest, SameSeedSameMaze) {
  const MazeSpec spec;
  const auto a = GenerateMaze(spec, 7);
  const auto b = GenerateMaze(spec, 7);
  const auto c = GenerateMaze(spec, 8);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  ASSERT_EQ(a->obstacles().size(), b->obstacles().size());
  for (size_t i = 0; i < a->obstacles().size(); ++i) {
    EXPECT_EQ(a->obstacles()[i].vertices(), b->obstacles()[i].vertices());
  }
  EXPECT_NE(UnionArea(Boxes(*a)), UnionArea(Boxes(*c)));
}

TEST(MazeTest, UnreachableGoalExhaustsReseeds) {
  MazeSpec s;
  s.bounds = {Point2(0, 0), Point2(20, 20)};
  s.start = Point2(2.5, 2.5);
  s.goal = Point2(17.5, 17.5);
  s.coverage = 0.55;
  s.min_side = 8.0;
  s.max_side = 8.0;
  s.path_clearance = 3.0;
  s.max_reseeds = 3;
  EXPECT_EQ(GenerateMaze(s, 1).status().code(),
            absl::StatusCode::kResourceExhausted);
}

double MaxSpacingDeviation(const std::vector<Point2>& pts, double target) {
  double worst = 0.0;
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    worst = std::max(worst, std::abs((pts[k + 1] - pts[k]).norm() - target) / target);
  }
  return worst;
}

TEST(GridPlannerTest, EmptyWorkspaceGivesStraightLine) {
  const Workspace w = Box(110, 10);
  GridPlannerOptions options;
  options.spacing = 0.39;
  const auto ref = ReferenceFromGrid(w, Point2(5, 5), Point2(105, 5), options);
  ASSERT_TRUE(ref.ok()) << ref.status();
  EXPECT_EQ(ref->size(), 257u);
  EXPECT_EQ(ref->front(), Point2(5, 5));
  EXPECT_EQ(ref->back(), Point2(105, 5));
  for (const Point2& p : *ref) EXPECT_NEAR(p.y(), 5.0, 1e-9);
  EXPECT_LE(MaxSpacingDeviation(*ref, 0.39), 0.2);
}

TEST(GridPlannerTest, PassesThroughGapInWall) {
  const Workspace w =
      Box(40, 40, {Polygon::Rectangle(Point2(19, 0), Point2(21, 17)),
                   Polygon::Rectangle(Point2(19, 23), Point2(21, 40))});
  const auto ref =
      ReferenceFromGrid(w, Point2(5, 5), Point2(35, 5), GridPlannerOptions());
  ASSERT_TRUE(ref.ok()) << ref.status();
  bool through = false;
  for (const Point2& p : *ref) {
    EXPECT_FALSE(w.PointInCollision(p));
    if (p.x() > 19 && p.x() < 21) through = through || (p.y() > 17 && p.y() < 23);
  }
  for (size_t k = 0; k + 1 < ref->size(); ++k) {
    EXPECT_FALSE(w.SegmentInCollision((*ref)[k], (*ref)[k + 1]));
  }
  EXPECT_TRUE(through);
}

TEST(GridPlannerTest, Errors) {
  const Workspace w =
      Box(40, 40, {Polygon::Rectangle(Point2(19, 0), Point2(21, 40))});
  EXPECT_EQ(ReferenceFromGrid(w, Point2(5, 5), Point2(35, 5),
                              GridPlannerOptions())
                .status()
                .code(),
            absl::StatusCode::kNotFound);
  EXPECT_EQ(ReferenceFromGrid(w, Point2(20, 5), Point2(35, 5),
                              GridPlannerOptions())
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
  GridPlannerOptions bad;
  bad.cell = 0.0;
  EXPECT_FALSE(ReferenceFromGrid(Box(40, 40), Point2(5, 5), Point2(35, 5), bad)
                   .ok());
}

TEST(GridPlannerTest, RandomWorkspacesGiveFreeEvenPaths) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> pos(0.0, 30.0);
  std::uniform_real_distribution<double> side(1.0, 6.0);
  const Point2 start(2, 2), goal(28, 28);
  int planned = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Polygon> obstacles;
    while (obstacles.size() < 6) {
      const Point2 lo(pos(rng), pos(rng));
      const Point2 hi = (lo + Point2(side(rng), side(rng))).cwiseMin(Point2(30, 30));
      const AlignedBox b{lo, hi};
      if (b.Distance(start) < 1.5 || b.Distance(goal) < 1.5) continue;
      obstacles.push_back(Polygon::Rectangle(lo, hi));
    }
    const Workspace w = Box(30, 30, obstacles);
    GridPlannerOptions options;
    options.fillet_radius = 10.0;
    const auto ref = ReferenceFromGrid(w, start, goal, options);
    if (!ref.ok()) {
      EXPECT_EQ(ref.status().code(), absl::StatusCode::kNotFound);
      continue;
    }
    ++planned;
    EXPECT_EQ(ref->front(), start);
    EXPECT_EQ(ref->back(), goal);
    for (size_t k = 0; k + 1 < ref->size(); ++k) {
      EXPECT_FALSE(w.SegmentInCollision((*ref)[k], (*ref)[k + 1])) << trial;
    }
    EXPECT_LE(MaxSpacingDeviation(*ref, options.spacing), 0.2) << trial;
    const auto again = ReferenceFromGrid(w, start, goal, options);
    EXPECT_EQ(*again, *ref);
  }
  EXPECT_GE(planned, 10);
}

TEST(ResampleTest, CountAndSpacing) {
  const std::vector<Point2> l = {{0, 0}, {3, 0}, {3, 1}};
  const auto five = ResampleToCount(l, 5);
  ASSERT_EQ(five.size(), 5u);
  EXPECT_EQ(five.front(), l.front());
  EXPECT_EQ(five.back(), l.back());
  EXPECT_NEAR((five[2] - Point2(2, 0)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((five[3] - Point2(3, 0)).norm(), 0.0, 1e-12);
  EXPECT_EQ(ResampleToSpacing(l, 0.5).size(), 9u);
  EXPECT_EQ(ResampleToSpacing(l, 100.0).size(), 2u);
}

TEST(CenterlineTest, EmptyLaneIsStraight) {
  const auto line = CorridorCenterline(Box(50, 6), 1, 49, 0.5);
  ASSERT_TRUE(line.ok());
  EXPECT_EQ(line->size(), 97u);
  for (const Point2& p : *line) EXPECT_DOUBLE_EQ(p.y(), 3.0);
}

TEST(CenterlineTest, ObstacleShiftsToWiderSide) {
  const Workspace w =
      Box(50, 6, {Polygon::Rectangle(Point2(20, 0), Point2(30, 4))});
  const auto line = CorridorCenterline(w, 1, 49, 0.5);
  ASSERT_TRUE(line.ok());
  for (const Point2& p : *line) {
    if (p.x() >= 19.5 && p.x() <= 30.5) EXPECT_DOUBLE_EQ(p.y(), 5.0) << p.x();
    if (p.x() < 19.0 || p.x() > 31.0) EXPECT_DOUBLE_EQ(p.y(), 3.0) << p.x();
  }
  const Workspace blocked =
      Box(50, 6, {Polygon::Rectangle(Point2(20, 0), Point2(30, 6))});
  EXPECT_EQ(CorridorCenterline(blocked, 1, 49, 0.5).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(LaneChangeTest, DefaultScenario) {
  const auto s = LaneChangeScenario(DefaultLaneChange());
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(s->generator, "lane_change");
  const VehicleParams& v = s->config.vehicle;
  EXPECT_EQ(v.mass_kg, 1725.0);
  EXPECT_EQ(v.mu, 0.5);
  EXPECT_NEAR(v.u_long_max_n, 0.3 * v.FrictionLimit(), 1e-9);
  // Swerve left past the first obstacle, then right past the second.
  double y_first = 0.0, y_second = 6.0;
  for (const Point2& p : s->reference) {
    EXPECT_FALSE(s->workspace.PointInCollision(p));
    if (std::abs(p.x() - 16.0) < 0.3) y_first = p.y();
    if (std::abs(p.x() - 34.0) < 0.3) y_second = p.y();
  }
  EXPECT_GT(y_first, 4.0);
  EXPECT_LT(y_second, 2.0);
  EXPECT_LE(MaxSpacingDeviation(s->reference, 0.5), 0.2);
  LaneSpec bad;
  bad.width = 0.0;
  EXPECT_FALSE(LaneChangeScenario(bad).ok());
}

TEST(MooseTest, ConfigAndPointSymmetry) {
  const GeneratedScenario s = MooseTestScenario();
  EXPECT_TRUE(s.config.constant_speed_mode);
  EXPECT_EQ(s.config.constant_speed, 5.0);
  EXPECT_EQ(s.config.vehicle.r_min_m, 5.0);
  const Point2 pivot(22.5, 1.75);
  const auto rotate = [&](const Point2& p) { return Point2(2.0 * pivot - p); };
  // Every wall vertex maps onto some wall vertex.
  for (const Polygon& poly : s.workspace.obstacles()) {
    for (const Point2& v : poly.vertices()) {
      bool found = false;
      for (const Polygon& other : s.workspace.obstacles()) {
        for (const Point2& u : other.vertices()) {
          found = found || (rotate(v) - u).norm() < 1e-12;
        }
      }
      EXPECT_TRUE(found) << v.transpose();
    }
  }
  const auto& ref = s.reference;
  for (size_t k = 0; k < ref.size(); ++k) {
    EXPECT_NEAR((rotate(ref[k]) - ref[ref.size() - 1 - k]).norm(), 0.0, 1e-9);
    EXPECT_FALSE(s.workspace.PointInCollision(ref[k]));
  }
}

TEST(ScenarioJsonTest, RoundTrip) {
  const auto lane = LaneChangeScenario(DefaultLaneChange());
  ASSERT_TRUE(lane.ok());
  const std::string text = ScenarioToJson(*lane);
  const auto back = ParseScenario(text, "ignored");
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->id, "lane-change");
  EXPECT_EQ(back->reference, lane->reference);
  EXPECT_EQ(back->config.vehicle.mass_kg, 1725.0);
  EXPECT_EQ(back->config.vehicle.u_long_max_n, lane->config.vehicle.u_long_max_n);
  ASSERT_EQ(back->workspace.obstacles().size(), 2u);
  EXPECT_EQ(back->workspace.obstacles()[1].vertices(),
            lane->workspace.obstacles()[1].vertices());
  EXPECT_EQ(ScenarioToJson(*back), text);
}

TEST(ScenarioJsonTest, GeneratorsAndOverrides) {
  const auto moose = ParseScenario(
      R"({"reference": {"generator": {"type": "moose"}},
          "ces": {"max_iterations": 3, "timeout_s": 2.5}})",
      "m");
  ASSERT_TRUE(moose.ok()) << moose.status();
  EXPECT_EQ(moose->id, "m");
  EXPECT_TRUE(moose->config.constant_speed_mode);
  EXPECT_EQ(moose->config.max_iterations, 3);
  EXPECT_EQ(moose->config.timeout_s, 2.5);
  const auto lane = ParseScenario(
      R"({"id": "x", "reference": {"generator": {"type": "lane_change",
          "obstacles": [[10, 0, 15, 3]]}}, "vehicle": {"mu": 0.9}})",
      "y");
  ASSERT_TRUE(lane.ok()) << lane.status();
  EXPECT_EQ(lane->id, "x");
  EXPECT_EQ(lane->config.vehicle.mu, 0.9);
  EXPECT_EQ(lane->workspace.obstacles().size(), 1u);
  const auto file = ParseScenario(
      R"({"workspace": {"bounds": [0, 0, 10, 10]},
          "reference": {"waypoints": [[1, 1], [2, 2], [3, 3], [4, 4]]}})",
      "f");
  ASSERT_TRUE(file.ok()) << file.status();
  EXPECT_EQ(file->reference.size(), 4u);
  EXPECT_TRUE(file->workspace.obstacles().empty());
}

TEST(ScenarioJsonTest, Errors) {
  const auto malformed = ParseScenario("{\"reference\": [1, 2", "e");
  ASSERT_FALSE(malformed.ok());
  EXPECT_NE(malformed.status().message().find("byte"), std::string::npos);
  const char* invalid[] = {
      R"({"reference": {"generator": {"type": "moose"}}, "extra": 1})",
      R"({"reference": {"generator": {"type": "moose"}}, "ces": {"r_x": 1}})",
      R"({"reference": {"generator": {"type": "spiral"}}})",
      R"({"reference": {"generator": {"type": "moose", "size": 2}}})",
      R"({"workspace": {"bounds": [0, 0, 9, 9]},
          "reference": {"generator": {"type": "moose"}}})",
      R"({"workspace": {"bounds": [0, 0, 9, 9]},
          "reference": {"waypoints": [[1, 1], [2, 2]],
                        "generator": {"type": "moose"}}})",
      R"({"reference": {"waypoints": [[1, 1], [2, 2]]}})",
      R"({"workspace": {"bounds": [0, 0, 9, 9]},
          "reference": {"waypoints": [[1, 1, 1]]}})",
      R"({"reference": {"generator": {"type": "moose"}},
          "vehicle": {"mu": -1}})",
      R"({"reference": {"generator": {"type": "moose"}},
          "ces": {"r_l": 5, "r_u": 1}})",
      R"({"ces": {}})",
      R"([1, 2])",
  };
  for (const char* text : invalid) {
    EXPECT_EQ(ParseScenario(text, "e").status().code(),
              absl::StatusCode::kInvalidArgument)
        << text;
  }
}

TEST(ScenarioJsonTest, LoadUsesFileStemAsId) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "ces_scenarios_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "tight.turn.json").string();
  std::ofstream(path) << R"({"reference": {"generator": {"type": "moose"}}})";
  const auto s = LoadScenario(path);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(s->id, "tight.turn");
  EXPECT_EQ(LoadScenario((dir / "missing.json").string()).status().code(),
            absl::StatusCode::kInvalidArgument);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace ces
