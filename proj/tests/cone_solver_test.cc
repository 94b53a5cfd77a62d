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

#include "ces/cone_solver.h"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "Eigen/Dense"
#include "gtest/gtest.h"

namespace ces {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

class ConeSolverTest : public testing::TestWithParam<SolverMethod> {
 protected:
  static SolverSettings Settings() {
    SolverSettings settings;
    settings.method = GetParam();
    return settings;
  }
};

TEST_P(ConeSolverTest, ScalarProjectionOntoInterval) {
  // minimize x^2 subject to |x - 3| <= 1.
  ConeProgram program(1);
  program.AddQuadratic(0, 0, 1.0);
  program.AddSecondOrderCone({AffineExpr({{0, 1.0}}, -3.0)}, AffineExpr(1.0));
  absl::StatusOr<Solution> sol = Solve(program, Settings());
  ASSERT_TRUE(sol.ok());
  EXPECT_EQ(sol->status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol->x(0), 2.0, 1e-5);
  EXPECT_NEAR(sol->objective_value, 4.0, 1e-4);
}

TEST_P(ConeSolverTest, BallProjection) {
  // minimize |x - c|^2 subject to |x| <= r.
  const Eigen::Vector3d c(3.0, -4.0, 12.0);
  const double r = 2.0;
  ConeProgram program(3);
  std::vector<AffineExpr> norm;
  for (int i = 0; i < 3; ++i) {
    program.AddSquaredAffine(AffineExpr({{i, 1.0}}, -c(i)));
    norm.push_back(AffineExpr({{i, 1.0}}));
  }
  program.AddSecondOrderCone(norm, AffineExpr(r));
  absl::StatusOr<Solution> sol = Solve(program, Settings());
  ASSERT_TRUE(sol.ok());
  ASSERT_EQ(sol->status, SolveStatus::kOptimal);
  const Eigen::Vector3d expected = r * c / c.norm();
  EXPECT_LT((sol->x - expected).norm(), 1e-5);
}

TEST_P(ConeSolverTest, EqualityAndIntervalRows) {
  // minimize x0 + 2 x1 subject to x0 + x1 = 1, 0 <= x0 <= 0.7, x1 >= 0.
  ConeProgram program(2);
  program.AddLinear(0, 1.0);
  program.AddLinear(1, 2.0);
  program.AddEquality(AffineExpr({{0, 1.0}, {1, 1.0}}), 1.0);
  program.AddInterval(AffineExpr({{0, 1.0}}), 0.0, 0.7);
  program.AddInterval(AffineExpr({{1, 1.0}}), 0.0, INFINITY);
  absl::StatusOr<Solution> sol = Solve(program, Settings());
  ASSERT_TRUE(sol.ok());
  ASSERT_EQ(sol->status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol->x(0), 0.7, 1e-5);
  EXPECT_NEAR(sol->x(1), 0.3, 1e-5);
}

// Random strongly convex instance over a product of simple sets so that an
// exact projection exists for the first-order oracle:
//   x[0..9]   in the ball |x - center| <= radius
//   x[10..14] in the box [-0.5, 0.5]
//   x[15..19] in the cone |x[16..19] - shift| <= x[15] + 1
struct RandomInstance {
  MatrixXd p;
  VectorXd q;
  VectorXd center;
  double radius = 0.0;
  VectorXd shift;

  explicit RandomInstance(unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    MatrixXd m(20, 20);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) m(i, j) = n(rng);
    p = m.transpose() * m / 20.0 + 0.1 * MatrixXd::Identity(20, 20);
    q.resize(20);
    for (int i = 0; i < 20; ++i) q(i) = 5.0 * n(rng);
    center.resize(10);
    for (int i = 0; i < 10; ++i) center(i) = n(rng);
    radius = 1.5;
    shift.resize(4);
    for (int i = 0; i < 4; ++i) shift(i) = n(rng);
  }

  ConeProgram Build() const {
    ConeProgram program(20);
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j <= i; ++j) {
        program.AddQuadratic(i, j, i == j ? 0.5 * p(i, i) : p(i, j));
      }
      program.AddLinear(i, q(i));
    }
    std::vector<AffineExpr> ball;
    for (int i = 0; i < 10; ++i) ball.push_back(AffineExpr({{i, 1.0}}, -center(i)));
    program.AddSecondOrderCone(ball, AffineExpr(radius));
    for (int i = 10; i < 15; ++i) program.AddInterval(AffineExpr({{i, 1.0}}), -0.5, 0.5);
    std::vector<AffineExpr> cone;
    for (int i = 0; i < 4; ++i) cone.push_back(AffineExpr({{16 + i, 1.0}}, -shift(i)));
    program.AddSecondOrderCone(cone, AffineExpr({{15, 1.0}}, 1.0));
    return program;
  }

  VectorXd Project(VectorXd x) const {
    VectorXd d = x.head(10) - center;
    if (d.norm() > radius) x.head(10) = center + radius * d / d.norm();
    for (int i = 10; i < 15; ++i) x(i) = std::clamp(x(i), -0.5, 0.5);
    // Cone in shifted coordinates (t, u) = (x15 + 1, x[16..19] - shift).
    double t = x(15) + 1.0;
    VectorXd u = x.tail(4) - shift;
    const double un = u.norm();
    if (un > t) {
      if (un <= -t) {
        t = 0.0;
        u.setZero();
      } else {
        const double a = 0.5 * (t + un);
        u *= a / un;
        t = a;
      }
    }
    x(15) = t - 1.0;
    x.tail(4) = u + shift;
    return x;
  }

  double Objective(const VectorXd& x) const {
    return 0.5 * x.dot(p * x) + q.dot(x);
  }

  // Projected gradient with step 1/L.
  VectorXd ProjectedGradient(int iterations) const {
    const double lipschitz =
        Eigen::SelfAdjointEigenSolver<MatrixXd>(p).eigenvalues().maxCoeff();
    VectorXd x = Project(VectorXd::Zero(20));
    for (int k = 0; k < iterations; ++k) {
      x = Project(x - (p * x + q) / lipschitz);
    }
    return x;
  }
};

TEST_P(ConeSolverTest, RandomInstanceMatchesProjectedGradientOracle) {
  for (unsigned seed : {1u, 2u, 3u}) {
    const RandomInstance inst(seed);
    const VectorXd reference = inst.ProjectedGradient(1000000);
    const double ref_obj = inst.Objective(reference);
    absl::StatusOr<Solution> sol = Solve(inst.Build(), Settings());
    ASSERT_TRUE(sol.ok());
    ASSERT_EQ(sol->status, SolveStatus::kOptimal) << "seed " << seed;
    EXPECT_NEAR(sol->objective_value, ref_obj, 1e-5 * std::abs(ref_obj))
        << "seed " << seed;
  }
}

TEST_P(ConeSolverTest, OptimalityUnderFeasiblePerturbations) {
  const RandomInstance inst(4);
  absl::StatusOr<Solution> sol = Solve(inst.Build(), Settings());
  ASSERT_TRUE(sol.ok());
  ASSERT_EQ(sol->status, SolveStatus::kOptimal);
  const VectorXd x = inst.Project(sol->x);
  const double f = inst.Objective(x);
  std::mt19937 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    VectorXd dir(20);
    for (int i = 0; i < 20; ++i) dir(i) = n(rng);
    const VectorXd y = inst.Project(x + 1e-3 * dir.normalized());
    EXPECT_GE(inst.Objective(y), f - 1e-4 * std::abs(f));
  }
}

TEST_P(ConeSolverTest, FeasibilityCertificateOnOptimalStatus) {
  const RandomInstance inst(5);
  const ConeProgram program = inst.Build();
  SolverSettings settings = Settings();
  absl::StatusOr<Solution> sol = Solve(program, settings);
  ASSERT_TRUE(sol.ok());
  ASSERT_EQ(sol->status, SolveStatus::kOptimal);
  for (const ConeBlock& b : program.blocks()) {
    EXPECT_LE(program.BlockViolation(b, sol->x),
              settings.feas_tol * program.BlockScale(b));
  }
  EXPECT_LE(sol->primal_residual, settings.feas_tol);
  EXPECT_LE(sol->dual_residual, settings.opt_tol);
}

TEST_P(ConeSolverTest, ResidualsTrendDownward) {
  const RandomInstance inst(6);
  SolverSettings settings = Settings();
  settings.max_iters = 400;
  settings.feas_tol = 1e-14;
  settings.opt_tol = 1e-14;
  absl::StatusOr<Solution> sol = Solve(inst.Build(), settings);
  ASSERT_TRUE(sol.ok());
  ASSERT_FALSE(sol->residual_history.empty());
  double at_tenth = 0.0;
  for (const auto& [iter, r] : sol->residual_history) {
    if (iter <= settings.max_iters / 10) at_tenth = r;
  }
  EXPECT_LE(sol->residual_history.back().second, at_tenth);
}

TEST_P(ConeSolverTest, DeterministicAndWarmStartable) {
  const RandomInstance inst(7);
  const ConeProgram program = inst.Build();
  absl::StatusOr<Solution> a = Solve(program, Settings());
  absl::StatusOr<Solution> b = Solve(program, Settings());
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->x, b->x);
  EXPECT_EQ(a->iterations, b->iterations);
  const WarmStart warm{a->x, a->y};
  absl::StatusOr<Solution> c = Solve(program, Settings(), &warm);
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->status, SolveStatus::kOptimal);
  EXPECT_LE(c->iterations, a->iterations);
}

TEST_P(ConeSolverTest, DetectsInfeasibility) {
  // |x| <= 1 and x >= 3.
  ConeProgram program(1);
  program.AddQuadratic(0, 0, 1.0);
  program.AddSecondOrderCone({AffineExpr({{0, 1.0}})}, AffineExpr(1.0));
  program.AddInterval(AffineExpr({{0, 1.0}}), 3.0, INFINITY);
  absl::StatusOr<Solution> sol = Solve(program, Settings());
  ASSERT_TRUE(sol.ok());
  EXPECT_EQ(sol->status, SolveStatus::kInfeasible);
}

TEST_P(ConeSolverTest, RejectsMalformedPrograms) {
  ConeProgram bad_index(2);
  bad_index.AddLinear(5, 1.0);
  EXPECT_FALSE(Solve(bad_index, Settings()).ok());

  ConeProgram indefinite(2);
  indefinite.AddQuadratic(0, 0, 1.0);
  indefinite.AddQuadratic(1, 1, -1.0);
  EXPECT_FALSE(Solve(indefinite, Settings()).ok());

  ConeProgram fine(2);
  fine.AddQuadratic(0, 0, 1.0);
  const WarmStart wrong{VectorXd::Zero(3), VectorXd()};
  EXPECT_FALSE(Solve(fine, Settings(), &wrong).ok());

  SolverSettings settings = Settings();
  settings.feas_tol = 0.0;
  EXPECT_FALSE(Solve(fine, settings).ok());
}

TEST_P(ConeSolverTest, ListingMentionsEveryBlock) {
  ConeProgram program(2);
  program.AddQuadratic(0, 1, 0.5);
  program.AddEquality(AffineExpr({{0, 1.0}}), 2.0);
  program.AddSecondOrderCone({AffineExpr({{1, 1.0}})}, AffineExpr(1.0));
  std::ostringstream out;
  program.WriteListing(out);
  EXPECT_NE(out.str().find("eq"), std::string::npos);
  EXPECT_NE(out.str().find("soc 2"), std::string::npos);
  EXPECT_NE(out.str().find("P 0 1 0.5"), std::string::npos);
}

INSTANTIATE_TEST_SUITE_P(
    Methods, ConeSolverTest,
    testing::Values(SolverMethod::kInteriorPoint, SolverMethod::kAdmm),
    [](const testing::TestParamInfo<SolverMethod>& info) {
      return info.param == SolverMethod::kAdmm ? "Admm" : "InteriorPoint";
    });

}  // namespace
}  // namespace ces
