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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>

#include "Eigen/SparseCholesky"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "interior_point.h"

namespace ces {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinScaling = 1e-4;
constexpr double kMaxScaling = 1e4;
constexpr double kRhoMin = 1e-6;
constexpr double kRhoMax = 1e6;
constexpr double kEqualityRhoFactor = 1e3;
constexpr int kRhoUpdateInterval = 50;
constexpr double kRhoUpdateRatio = 5.0;
constexpr double kDivergenceThreshold = 1e8;
constexpr int kStallChecks = 20;

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

double ClampScale(double v) {
  if (v < kMinScaling) return 1.0;
  return std::min(v, kMaxScaling);
}

double InfNorm(const Vec& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

// Projection onto {(t, u) : |u| <= t}.
void ProjectSecondOrderCone(Eigen::Ref<Vec> v) {
  const double t = v(0);
  const double u = v.tail(v.size() - 1).norm();
  if (u <= t) return;
  if (u <= -t) {
    v.setZero();
    return;
  }
  const double a = 0.5 * (t + u);
  v.tail(v.size() - 1) *= a / u;
  v(0) = a;
}

// Columnwise infinity norms of a column-major sparse matrix.
Vec ColumnNorms(const SpMat& m) {
  Vec out = Vec::Zero(m.cols());
  for (int j = 0; j < m.outerSize(); ++j) {
    for (SpMat::InnerIterator it(m, j); it; ++it) {
      out(j) = std::max(out(j), std::abs(it.value()));
    }
  }
  return out;
}

Vec RowNorms(const SpMat& m) {
  Vec out = Vec::Zero(m.rows());
  for (int j = 0; j < m.outerSize(); ++j) {
    for (SpMat::InnerIterator it(m, j); it; ++it) {
      out(it.row()) = std::max(out(it.row()), std::abs(it.value()));
    }
  }
  return out;
}

bool IsEqualityRow(double lower, double upper) { return lower == upper; }

class AdmmSolver {
 public:
  AdmmSolver(const ConeProgram& program, const SolverSettings& settings)
      : program_(program),
        settings_(settings),
        n_(program.num_vars()),
        m_(program.num_rows()) {}

  absl::StatusOr<Solution> Run(const WarmStart* warm_start);

 private:
  void Equilibrate();
  void SetRho(double rho);
  absl::Status Factorize();
  void Project(Vec& z) const;
  Vec UnscaledX(const Vec& x) const { return d_.cwiseProduct(x); }
  Vec UnscaledY(const Vec& y) const { return e_.cwiseProduct(y) / cost_scale_; }

  const ConeProgram& program_;
  const SolverSettings& settings_;
  const int n_;
  const int m_;

  SpMat p_;  // scaled, full symmetric
  SpMat a_;  // scaled
  Vec q_;
  Vec lower_;
  Vec upper_;
  Vec shift_;  // cone offsets, scaled
  Vec d_;
  Vec e_;
  double cost_scale_ = 1.0;

  double rho_ = 0.1;
  Vec rho_vec_;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt_;
  bool analyzed_ = false;
};

void AdmmSolver::Equilibrate() {
  const SpMat p_raw = program_.ObjectiveMatrix();
  const SpMat a_raw = program_.ConstraintMatrix();
  const Vec offsets = program_.Offsets();
  p_ = p_raw;
  a_ = a_raw;
  q_ = program_.ObjectiveLinear();
  d_ = Vec::Ones(n_);
  e_ = Vec::Ones(m_);
  cost_scale_ = 1.0;

  for (int it = 0; it < settings_.ruiz_iterations; ++it) {
    Vec col = ColumnNorms(p_).cwiseMax(ColumnNorms(a_));
    Vec row = RowNorms(a_);
    Vec dj(n_);
    for (int j = 0; j < n_; ++j) dj(j) = 1.0 / std::sqrt(ClampScale(col(j)));
    Vec ei(m_);
    for (int i = 0; i < m_; ++i) ei(i) = 1.0 / std::sqrt(ClampScale(row(i)));
    // Cones need a uniform scale over their rows.
    for (const ConeBlock& b : program_.blocks()) {
      if (b.kind != ConeKind::kSecondOrder) continue;
      const double block_norm = row.segment(b.first_row, b.num_rows).maxCoeff();
      ei.segment(b.first_row, b.num_rows)
          .setConstant(1.0 / std::sqrt(ClampScale(block_norm)));
    }
    p_ = dj.asDiagonal() * p_ * dj.asDiagonal();
    a_ = ei.asDiagonal() * a_ * dj.asDiagonal();
    q_ = dj.cwiseProduct(q_);
    d_ = d_.cwiseProduct(dj);
    e_ = e_.cwiseProduct(ei);

    const Vec pcol = ColumnNorms(p_);
    const double mean_col = n_ > 0 ? pcol.mean() : 0.0;
    const double gamma =
        1.0 / ClampScale(std::max(ClampScale(mean_col), InfNorm(q_)));
    p_ *= gamma;
    q_ *= gamma;
    cost_scale_ *= gamma;
  }

  lower_.resize(m_);
  upper_.resize(m_);
  shift_ = Vec::Zero(m_);
  for (const ConeBlock& b : program_.blocks()) {
    for (int r = b.first_row; r < b.first_row + b.num_rows; ++r) {
      if (b.kind == ConeKind::kSecondOrder) {
        shift_(r) = e_(r) * offsets(r);
        lower_(r) = -kInf;
        upper_(r) = kInf;
      } else {
        lower_(r) = e_(r) * (program_.lower()[r] - offsets(r));
        upper_(r) = e_(r) * (program_.upper()[r] - offsets(r));
      }
    }
  }
}

void AdmmSolver::SetRho(double rho) {
  rho_ = std::clamp(rho, kRhoMin, kRhoMax);
  rho_vec_.resize(m_);
  for (const ConeBlock& b : program_.blocks()) {
    for (int r = b.first_row; r < b.first_row + b.num_rows; ++r) {
      double value = rho_;
      if (b.kind != ConeKind::kSecondOrder) {
        const double lo = program_.lower()[r];
        const double hi = program_.upper()[r];
        if (IsEqualityRow(lo, hi)) {
          value = kEqualityRhoFactor * rho_;
        } else if (std::isinf(lo) && std::isinf(hi)) {
          value = kRhoMin;
        }
      }
      rho_vec_(r) = value;
    }
  }
}

absl::Status AdmmSolver::Factorize() {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(p_.nonZeros() + a_.nonZeros() + n_ + m_);
  for (int j = 0; j < p_.outerSize(); ++j) {
    for (SpMat::InnerIterator it(p_, j); it; ++it) {
      if (it.row() >= it.col()) trips.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int j = 0; j < n_; ++j) trips.emplace_back(j, j, settings_.sigma);
  for (int j = 0; j < a_.outerSize(); ++j) {
    for (SpMat::InnerIterator it(a_, j); it; ++it) {
      trips.emplace_back(n_ + it.row(), it.col(), it.value());
    }
  }
  for (int i = 0; i < m_; ++i) trips.emplace_back(n_ + i, n_ + i, -1.0 / rho_vec_(i));
  SpMat kkt(n_ + m_, n_ + m_);
  kkt.setFromTriplets(trips.begin(), trips.end());
  if (!analyzed_) {
    ldlt_.analyzePattern(kkt);
    analyzed_ = true;
  }
  ldlt_.factorize(kkt);
  if (ldlt_.info() != Eigen::Success) {
    return absl::InternalError("KKT factorization failed");
  }
  return absl::OkStatus();
}

void AdmmSolver::Project(Vec& z) const {
  for (const ConeBlock& b : program_.blocks()) {
    auto seg = z.segment(b.first_row, b.num_rows);
    switch (b.kind) {
      case ConeKind::kZero:
      case ConeKind::kBox:
        for (int r = 0; r < b.num_rows; ++r) {
          const int row = b.first_row + r;
          seg(r) = std::clamp(seg(r), lower_(row), upper_(row));
        }
        break;
      case ConeKind::kSecondOrder: {
        Vec v = seg + shift_.segment(b.first_row, b.num_rows);
        ProjectSecondOrderCone(v);
        seg = v - shift_.segment(b.first_row, b.num_rows);
        break;
      }
    }
  }
}

absl::StatusOr<Solution> AdmmSolver::Run(const WarmStart* warm_start) {
  const auto start = std::chrono::steady_clock::now();
  Equilibrate();
  SetRho(settings_.rho);
  if (absl::Status s = Factorize(); !s.ok()) return s;

  const SpMat p_raw = program_.ObjectiveMatrix();
  const SpMat a_raw = program_.ConstraintMatrix();
  const Vec q_raw = program_.ObjectiveLinear();

  Vec x = Vec::Zero(n_);
  Vec y = Vec::Zero(m_);
  if (warm_start != nullptr && warm_start->x.size() == n_) {
    x = warm_start->x.cwiseQuotient(d_);
    if (warm_start->y.size() == m_) {
      y = cost_scale_ * warm_start->y.cwiseQuotient(e_);
    }
  }
  Vec z = a_ * x;
  Project(z);

  Solution sol;
  Vec rhs(n_ + m_);
  Vec xt(n_);
  Vec zt(m_);
  Vec z_prev(m_);
  double best_primal = kInf;
  int stall = 0;
  int iter = 0;
  sol.status = SolveStatus::kMaxIterations;

  for (iter = 1; iter <= settings_.max_iters; ++iter) {
    rhs.head(n_) = settings_.sigma * x - q_;
    rhs.tail(m_) = z - y.cwiseQuotient(rho_vec_);
    const Vec sol_kkt = ldlt_.solve(rhs);
    xt = sol_kkt.head(n_);
    zt = z + (sol_kkt.tail(m_) - y).cwiseQuotient(rho_vec_);
    x = settings_.alpha * xt + (1.0 - settings_.alpha) * x;
    z_prev = z;
    const Vec z_relaxed = settings_.alpha * zt + (1.0 - settings_.alpha) * z_prev;
    z = z_relaxed + y.cwiseQuotient(rho_vec_);
    Project(z);
    y += rho_vec_.cwiseProduct(z_relaxed - z);

    const bool check = iter % settings_.check_interval == 0 ||
                       iter == settings_.max_iters;
    if (!check) continue;

    const Vec xu = UnscaledX(x);
    const Vec yu = UnscaledY(y);
    // Both the true constraint violation and the splitting residual
    // Ax - z must be small; the latter enforces complementarity.
    const Vec split = (a_ * x - z).cwiseQuotient(e_);
    double primal = 0.0;
    bool primal_ok = true;
    for (const ConeBlock& b : program_.blocks()) {
      const double violation =
          std::max(program_.BlockViolation(b, xu),
                   InfNorm(split.segment(b.first_row, b.num_rows)));
      const double scale = program_.BlockScale(b);
      primal = std::max(primal, violation / scale);
      if (violation > settings_.feas_tol * scale) primal_ok = false;
    }
    const Vec px = p_raw * xu;
    const Vec aty = a_raw.transpose() * yu;
    const double dual = InfNorm(px + q_raw + aty);
    const double dual_scale =
        1.0 + std::max({InfNorm(px), InfNorm(aty), InfNorm(q_raw)});
    const bool dual_ok = dual <= settings_.opt_tol * dual_scale;
    sol.residual_history.emplace_back(iter, std::max(primal, dual / dual_scale));
    sol.primal_residual = primal;
    sol.dual_residual = dual / dual_scale;

    if (primal_ok && dual_ok) {
      sol.status = SolveStatus::kOptimal;
      break;
    }

    if (primal < 0.99 * best_primal) {
      best_primal = primal;
      stall = 0;
    } else {
      ++stall;
    }
    if (InfNorm(yu) > kDivergenceThreshold && stall >= kStallChecks) {
      sol.status = SolveStatus::kInfeasible;
      break;
    }

    if (settings_.time_limit_s.has_value()) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();
      if (elapsed > *settings_.time_limit_s) {
        sol.status = SolveStatus::kTimeLimit;
        break;
      }
    }

    if (settings_.adaptive_rho && iter % kRhoUpdateInterval == 0) {
      const Vec ax = a_ * x;
      const double prim_s = InfNorm(ax - z) /
                            std::max({InfNorm(ax), InfNorm(z), 1e-10});
      const Vec pxs = p_ * x;
      const Vec atys = a_.transpose() * y;
      const double dual_s =
          InfNorm(pxs + q_ + atys) /
          std::max({InfNorm(pxs), InfNorm(atys), InfNorm(q_), 1e-10});
      const double ratio = std::sqrt(prim_s / std::max(dual_s, 1e-16));
      const double rho_new = std::clamp(rho_ * ratio, kRhoMin, kRhoMax);
      if (rho_new > kRhoUpdateRatio * rho_ || rho_new < rho_ / kRhoUpdateRatio) {
        SetRho(rho_new);
        if (absl::Status s = Factorize(); !s.ok()) return s;
      }
    }
  }

  sol.iterations = std::min(iter, settings_.max_iters);
  sol.x = UnscaledX(x);
  sol.y = UnscaledY(y);
  sol.objective_value = program_.Objective(sol.x);
  return sol;
}

}  // namespace

double AffineExpr::Evaluate(const Eigen::VectorXd& x) const {
  double v = constant;
  for (const auto& [i, c] : terms) v += c * x(i);
  return v;
}

ConeProgram::ConeProgram(int num_vars)
    : num_vars_(num_vars), linear_(std::max(num_vars, 0), 0.0) {
  if (num_vars < 0) status_ = absl::InvalidArgumentError("negative size");
}

absl::Status ConeProgram::CheckVar(int i) const {
  if (i < 0 || i >= num_vars_) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "variable index %d out of range [0, %d)", i, num_vars_));
  }
  return absl::OkStatus();
}

void ConeProgram::AddQuadratic(int i, int j, double weight) {
  if (absl::Status s = CheckVar(i); !s.ok()) {
    status_.Update(s);
    return;
  }
  if (absl::Status s = CheckVar(j); !s.ok()) {
    status_.Update(s);
    return;
  }
  // 1/2 x'Px form: x_i x_j appears as P_ij + P_ji.
  if (i == j) {
    quadratic_.emplace_back(i, i, 2.0 * weight);
  } else {
    quadratic_.emplace_back(i, j, weight);
    quadratic_.emplace_back(j, i, weight);
  }
}

void ConeProgram::AddLinear(int i, double weight) {
  if (absl::Status s = CheckVar(i); !s.ok()) {
    status_.Update(s);
    return;
  }
  linear_[i] += weight;
}

void ConeProgram::AddSquaredAffine(const AffineExpr& expr, double weight) {
  for (const auto& [i, ci] : expr.terms) {
    for (const auto& [j, cj] : expr.terms) {
      if (CheckVar(i).ok() && CheckVar(j).ok()) {
        quadratic_.emplace_back(i, j, 2.0 * weight * ci * cj);
      }
    }
    AddLinear(i, 2.0 * weight * ci * expr.constant);
  }
  constant_ += weight * expr.constant * expr.constant;
}

int ConeProgram::AddRow(const AffineExpr& expr, double lower, double upper) {
  for (const auto& [i, c] : expr.terms) {
    status_.Update(CheckVar(i));
    if (!std::isfinite(c)) {
      status_.Update(absl::InvalidArgumentError("non-finite coefficient"));
    }
  }
  if (!std::isfinite(expr.constant)) {
    status_.Update(absl::InvalidArgumentError("non-finite constant"));
  }
  rows_.push_back(expr);
  lower_.push_back(lower);
  upper_.push_back(upper);
  return static_cast<int>(rows_.size()) - 1;
}

void ConeProgram::AddEquality(const AffineExpr& expr, double rhs) {
  const int row = AddRow(expr, rhs, rhs);
  blocks_.push_back({ConeKind::kZero, row, 1});
}

void ConeProgram::AddInterval(const AffineExpr& expr, double lower,
                              double upper) {
  if (lower > upper || std::isnan(lower) || std::isnan(upper)) {
    status_.Update(absl::InvalidArgumentError("empty interval"));
  }
  const int row = AddRow(expr, lower, upper);
  blocks_.push_back({ConeKind::kBox, row, 1});
}

void ConeProgram::AddSecondOrderCone(const std::vector<AffineExpr>& norm_terms,
                                     const AffineExpr& bound) {
  const int first = AddRow(bound, -kInf, kInf);
  for (const AffineExpr& t : norm_terms) AddRow(t, -kInf, kInf);
  blocks_.push_back(
      {ConeKind::kSecondOrder, first, 1 + static_cast<int>(norm_terms.size())});
}

Eigen::SparseMatrix<double> ConeProgram::ObjectiveMatrix() const {
  SpMat p(num_vars_, num_vars_);
  p.setFromTriplets(quadratic_.begin(), quadratic_.end());
  p.makeCompressed();
  return p;
}

Eigen::VectorXd ConeProgram::ObjectiveLinear() const {
  return Eigen::Map<const Vec>(linear_.data(), num_vars_);
}

Eigen::SparseMatrix<double> ConeProgram::ConstraintMatrix() const {
  std::vector<Eigen::Triplet<double>> trips;
  for (int r = 0; r < num_rows(); ++r) {
    for (const auto& [i, c] : rows_[r].terms) trips.emplace_back(r, i, c);
  }
  SpMat a(num_rows(), num_vars_);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

Eigen::VectorXd ConeProgram::Offsets() const {
  Vec out(num_rows());
  for (int r = 0; r < num_rows(); ++r) out(r) = rows_[r].constant;
  return out;
}

double ConeProgram::Objective(const Eigen::VectorXd& x) const {
  const SpMat p = ObjectiveMatrix();
  return 0.5 * x.dot(p * x) + ObjectiveLinear().dot(x) + constant_;
}

double ConeProgram::BlockViolation(const ConeBlock& block,
                                   const Eigen::VectorXd& x) const {
  if (block.kind == ConeKind::kSecondOrder) {
    const double bound = rows_[block.first_row].Evaluate(x);
    double norm2 = 0.0;
    for (int r = block.first_row + 1; r < block.first_row + block.num_rows; ++r) {
      const double v = rows_[r].Evaluate(x);
      norm2 += v * v;
    }
    return std::max(0.0, std::sqrt(norm2) - bound);
  }
  double worst = 0.0;
  for (int r = block.first_row; r < block.first_row + block.num_rows; ++r) {
    const double v = rows_[r].Evaluate(x);
    worst = std::max({worst, lower_[r] - v, v - upper_[r]});
  }
  return worst;
}

double ConeProgram::BlockScale(const ConeBlock& block) const {
  if (block.kind == ConeKind::kSecondOrder) {
    double norm2 = 0.0;
    for (int r = block.first_row + 1; r < block.first_row + block.num_rows; ++r) {
      norm2 += rows_[r].constant * rows_[r].constant;
    }
    return 1.0 + std::sqrt(norm2) + std::abs(rows_[block.first_row].constant);
  }
  double scale = 0.0;
  for (int r = block.first_row; r < block.first_row + block.num_rows; ++r) {
    double s = std::abs(rows_[r].constant);
    if (std::isfinite(lower_[r])) s = std::max(s, std::abs(lower_[r]));
    if (std::isfinite(upper_[r])) s = std::max(s, std::abs(upper_[r]));
    scale = std::max(scale, s);
  }
  return 1.0 + scale;
}

double ConeProgram::MaxRelativeViolation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (const ConeBlock& b : blocks_) {
    worst = std::max(worst, BlockViolation(b, x) / BlockScale(b));
  }
  return worst;
}

void ConeProgram::WriteListing(std::ostream& out) const {
  out << std::setprecision(17);
  out << "vars " << num_vars_ << "\n";
  out << "objective_constant " << constant_ << "\n";
  for (int i = 0; i < num_vars_; ++i) {
    if (linear_[i] != 0.0) out << "q " << i << ' ' << linear_[i] << "\n";
  }
  const SpMat p = ObjectiveMatrix();
  for (int j = 0; j < p.outerSize(); ++j) {
    for (SpMat::InnerIterator it(p, j); it; ++it) {
      out << "P " << it.row() << ' ' << it.col() << ' ' << it.value() << "\n";
    }
  }
  for (const ConeBlock& b : blocks_) {
    switch (b.kind) {
      case ConeKind::kZero:
        out << "eq";
        break;
      case ConeKind::kBox:
        out << "box " << lower_[b.first_row] << ' ' << upper_[b.first_row];
        break;
      case ConeKind::kSecondOrder:
        out << "soc " << b.num_rows;
        break;
    }
    out << "\n";
    for (int r = b.first_row; r < b.first_row + b.num_rows; ++r) {
      out << "  row " << rows_[r].constant;
      for (const auto& [i, c] : rows_[r].terms) out << ' ' << i << ':' << c;
      if (b.kind == ConeKind::kZero) out << " = " << lower_[r];
      out << "\n";
    }
  }
}

std::string_view ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kMaxIterations:
      return "max_iters";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kTimeLimit:
      return "time_limit";
  }
  return "unknown";
}

absl::Status ValidateSettings(const SolverSettings& settings) {
  if (!(settings.feas_tol > 0.0) || !(settings.opt_tol > 0.0)) {
    return absl::InvalidArgumentError("solver tolerances must be positive");
  }
  if (settings.max_iters < 1 || settings.check_interval < 1) {
    return absl::InvalidArgumentError("iteration limits must be positive");
  }
  if (!(settings.alpha > 0.0 && settings.alpha < 2.0) || !(settings.rho > 0.0) ||
      !(settings.sigma > 0.0)) {
    return absl::InvalidArgumentError("invalid ADMM parameters");
  }
  return absl::OkStatus();
}

absl::StatusOr<Solution> Solve(const ConeProgram& program,
                               const SolverSettings& settings,
                               const WarmStart* warm_start) {
  if (!program.status().ok()) return program.status();
  if (absl::Status s = ValidateSettings(settings); !s.ok()) return s;
  if (warm_start != nullptr && warm_start->x.size() != 0 &&
      warm_start->x.size() != program.num_vars()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "warm start has %d entries, program has %d variables",
        warm_start->x.size(), program.num_vars()));
  }

  // Positive semidefiniteness check by factorization of a slightly shifted P.
  const SpMat p = program.ObjectiveMatrix();
  if (p.nonZeros() > 0) {
    const SpMat asym = p - SpMat(p.transpose());
    double asym_max = 0.0;
    double p_max = 0.0;
    for (int j = 0; j < p.outerSize(); ++j) {
      for (SpMat::InnerIterator it(p, j); it; ++it) {
        p_max = std::max(p_max, std::abs(it.value()));
      }
      for (SpMat::InnerIterator it(asym, j); it; ++it) {
        asym_max = std::max(asym_max, std::abs(it.value()));
      }
    }
    if (asym_max > 1e-12 * (1.0 + p_max)) {
      return absl::InvalidArgumentError("objective matrix is not symmetric");
    }
    SpMat shifted = p;
    const double shift = 1e-9 * (1.0 + p_max);
    for (int i = 0; i < p.rows(); ++i) shifted.coeffRef(i, i) += shift;
    Eigen::SimplicialLDLT<SpMat> check(shifted);
    if (check.info() != Eigen::Success ||
        check.vectorD().minCoeff() <= 0.0) {
      return absl::InvalidArgumentError(
          "objective matrix is not positive semidefinite");
    }
  }
  if (program.num_vars() == 0) {
    Solution sol;
    sol.status = program.MaxRelativeViolation(Eigen::VectorXd()) <=
                         settings.feas_tol
                     ? SolveStatus::kOptimal
                     : SolveStatus::kInfeasible;
    sol.objective_value = program.objective_constant();
    return sol;
  }
  if (settings.method == SolverMethod::kInteriorPoint) {
    return internal::SolveInteriorPoint(program, settings);
  }
  AdmmSolver solver(program, settings);
  return solver.Run(warm_start);
}

}  // namespace ces
