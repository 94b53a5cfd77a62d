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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace ces {
namespace {

TEST(VehicleParamsTest, DefaultsAndLimits) {
  VehicleParams v;
  EXPECT_NEAR(v.FrictionLimit(), 0.8 * 833.0 * 9.81, 1e-9);
  EXPECT_NEAR(v.MaxAcceleration(), 0.5 * 0.8 * 9.81, 1e-12);
  std::vector<std::string> warnings;
  EXPECT_TRUE(ValidateVehicleParams(v, &warnings).ok());
  EXPECT_TRUE(warnings.empty());
}

TEST(VehicleParamsTest, RejectsNonPositiveAndNonFinite) {
  for (int field = 0; field < 5; ++field) {
    for (double bad : {0.0, -1.0, std::nan(""), double{INFINITY}}) {
      VehicleParams v;
      double* slots[] = {&v.mass_kg, &v.mu, &v.g, &v.u_long_max_n, &v.r_min_m};
      *slots[field] = bad;
      EXPECT_EQ(ValidateVehicleParams(v).code(),
                absl::StatusCode::kInvalidArgument)
          << field << " " << bad;
    }
  }
}

TEST(VehicleParamsTest, SlackTractionLimitWarns) {
  VehicleParams v;
  v.u_long_max_n = 2.0 * v.FrictionLimit();
  std::vector<std::string> warnings;
  EXPECT_TRUE(ValidateVehicleParams(v, &warnings).ok());
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("never binds"), std::string::npos);
}

TEST(ReferencePathTest, LengthsAndTangents) {
  const auto path = ReferencePath::Create({{0, 0}, {3, 4}, {6, 8}, {6, 10}});
  ASSERT_TRUE(path.ok());
  EXPECT_EQ(path->size(), 4);
  EXPECT_DOUBLE_EQ(path->Length(), 12.0);
  EXPECT_DOUBLE_EQ(path->AverageBandLength(), 4.0);
  EXPECT_NEAR(path->Tangent(0).x(), 0.6, 1e-15);
  EXPECT_NEAR(path->Tangent(1).y(), 0.8, 1e-15);
  EXPECT_NEAR(path->Tangent(3).y(), 1.0, 1e-15);
}

TEST(ReferencePathTest, RejectsShortDuplicateAndNonFinite) {
  EXPECT_FALSE(ReferencePath::Create({{0, 0}, {1, 0}, {2, 0}}).ok());
  EXPECT_TRUE(ReferencePath::Create({{0, 0}, {1, 0}, {2, 0}}, 3).ok());
  EXPECT_FALSE(ReferencePath::Create({{0, 0}, {1, 0}, {1, 0}, {2, 0}}).ok());
  EXPECT_FALSE(
      ReferencePath::Create({{0, 0}, {1, 0}, {NAN, 0}, {2, 0}}).ok());
}

TEST(MengerCurvatureTest, Examples) {
  EXPECT_EQ(MengerCurvature({0, 0}, {1, 0}, {2, 0}), 0.0);
  EXPECT_EQ(MengerCurvature({0, 0}, {0, 0}, {2, 0}), 0.0);
  // Left turn is positive.
  EXPECT_NEAR(MengerCurvature({1, 0}, {0, 1}, {-1, 0}), 1.0, 1e-15);
  EXPECT_NEAR(MengerCurvature({-1, 0}, {0, 1}, {1, 0}), -1.0, 1e-15);
}

// Three points on a random circle recover its radius.
TEST(MengerCurvatureTest, RecoversCircleRadius) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> radius(0.1, 100.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> offset(-50.0, 50.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double r = radius(rng);
    const Point2 c(offset(rng), offset(rng));
    double t[3] = {angle(rng), angle(rng), angle(rng)};
    std::sort(t, t + 3);
    if (t[1] - t[0] < 0.05 || t[2] - t[1] < 0.05) continue;
    const auto at = [&](double a) {
      return Point2(c.x() + r * std::cos(a), c.y() + r * std::sin(a));
    };
    // Increasing angles run counterclockwise.
    EXPECT_NEAR(MengerCurvature(at(t[0]), at(t[1]), at(t[2])), 1.0 / r,
                1e-8 / r)
        << trial;
  }
}

TEST(PolylineTest, LengthAndBand) {
  EXPECT_EQ(PolylineLength({}), 0.0);
  EXPECT_EQ(AverageBandLength({{1, 1}}), 0.0);
  EXPECT_DOUBLE_EQ(PolylineLength({{0, 0}, {1, 0}, {1, 2}}), 3.0);
  EXPECT_DOUBLE_EQ(AverageBandLength({{0, 0}, {1, 0}, {1, 2}}), 1.5);
}

}  // namespace
}  // namespace ces
