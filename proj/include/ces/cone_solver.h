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

#ifndef CES_CONE_SOLVER_H_
#define CES_CONE_SOLVER_H_

#include <optional>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "Eigen/SparseCore"
#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace ces {

// Sparse affine function sum_i coeff_i * x[var_i] + constant.
struct AffineExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  AffineExpr() = default;
  explicit AffineExpr(double c) : constant(c) {}
  AffineExpr(std::vector<std::pair<int, double>> t, double c = 0.0)
      : terms(std::move(t)), constant(c) {}

  double Evaluate(const Eigen::VectorXd& x) const;
};

enum class ConeKind { kZero, kBox, kSecondOrder };

// A block of constraint rows. For kZero the rows equal `lower`; for kBox
// they lie in [lower, upper]; for kSecondOrder the first row bounds the
// Euclidean norm of the remaining ones.
struct ConeBlock {
  ConeKind kind;
  int first_row;
  int num_rows;
};

// Convex program
//   minimize    1/2 x'Px + q'x + constant
//   subject to  linear equalities, interval constraints and
//               second-order cones |A_i x + b_i| <= c_i'x + d_i.
class ConeProgram {
 public:
  explicit ConeProgram(int num_vars);

  int num_vars() const { return num_vars_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<ConeBlock>& blocks() const { return blocks_; }

  // Adds weight * x_i * x_j to the objective.
  void AddQuadratic(int i, int j, double weight);
  void AddLinear(int i, double weight);
  void AddConstant(double c) { constant_ += c; }
  // Adds weight * (expr)^2 to the objective.
  void AddSquaredAffine(const AffineExpr& expr, double weight = 1.0);

  void AddEquality(const AffineExpr& expr, double rhs);
  // lower <= expr <= upper; either side may be infinite.
  void AddInterval(const AffineExpr& expr, double lower, double upper);
  // |(norm_terms)| <= bound.
  void AddSecondOrderCone(const std::vector<AffineExpr>& norm_terms,
                          const AffineExpr& bound);

  // Assembled data. P is symmetric (both triangles stored).
  Eigen::SparseMatrix<double> ObjectiveMatrix() const;
  Eigen::VectorXd ObjectiveLinear() const;
  double objective_constant() const { return constant_; }
  // Row i is the affine expression rows()[i] with constant offsets().
  Eigen::SparseMatrix<double> ConstraintMatrix() const;
  Eigen::VectorXd Offsets() const;
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  double Objective(const Eigen::VectorXd& x) const;
  // Largest violation over all blocks, each measured relative to
  // 1 + |constants| of that block.
  double MaxRelativeViolation(const Eigen::VectorXd& x) const;
  // Violation of a single block, in absolute units (norm minus bound for a
  // cone, distance to the interval otherwise).
  double BlockViolation(const ConeBlock& block, const Eigen::VectorXd& x) const;
  double BlockScale(const ConeBlock& block) const;

  // Plain-text coefficient listing for offline inspection.
  void WriteListing(std::ostream& out) const;

  // First construction error (bad variable index, non-finite coefficient).
  const absl::Status& status() const { return status_; }

 private:
  int AddRow(const AffineExpr& expr, double lower, double upper);
  absl::Status CheckVar(int i) const;

  int num_vars_;
  absl::Status status_;
  std::vector<Eigen::Triplet<double>> quadratic_;
  std::vector<double> linear_;
  double constant_ = 0.0;
  std::vector<AffineExpr> rows_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<ConeBlock> blocks_;
};

enum class SolverMethod {
  // Primal-dual interior point with Nesterov-Todd scaling.
  kInteriorPoint,
  // Operator splitting with cone projections and a pre-factorized KKT system.
  kAdmm,
};

struct SolverSettings {
  SolverMethod method = SolverMethod::kInteriorPoint;
  // Relative primal feasibility tolerance.
  double feas_tol = 1e-6;
  // Relative dual residual tolerance.
  double opt_tol = 1e-6;
  // The interior-point method additionally caps its iterations at 200.
  int max_iters = 100000;
  std::optional<double> time_limit_s;
  // ADMM parameters.
  double rho = 0.1;
  double sigma = 1e-6;
  double alpha = 1.6;
  int check_interval = 10;
  int ruiz_iterations = 15;
  bool adaptive_rho = true;
};

enum class SolveStatus { kOptimal, kMaxIterations, kInfeasible, kTimeLimit };

std::string_view ToString(SolveStatus status);

struct WarmStart {
  Eigen::VectorXd x;
  // Constraint multipliers; optional.
  Eigen::VectorXd y;
};

struct Solution {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  SolveStatus status = SolveStatus::kMaxIterations;
  double objective_value = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  // (iteration, max(primal, dual) residual) at each convergence check.
  std::vector<std::pair<int, double>> residual_history;
};

absl::Status ValidateSettings(const SolverSettings& settings);

// Status kOptimal guarantees every block satisfies
// BlockViolation <= feas_tol * BlockScale and the dual residual is within
// opt_tol. The warm start seeds the ADMM iterate; the interior-point method
// ignores it. Malformed programs (bad indices, non-PSD objective) return
// an error status; detected infeasibility is reported in Solution::status.
absl::StatusOr<Solution> Solve(const ConeProgram& program,
                               const SolverSettings& settings,
                               const WarmStart* warm_start = nullptr);

}  // namespace ces

#endif  // CES_CONE_SOLVER_H_
