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

#include "interior_point.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "Eigen/SparseCholesky"
#include "absl/status/status.h"

namespace ces::internal {
namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRegularization = 1e-9;
constexpr double kMaxRegularization = 1e-4;
constexpr int kRefinementSteps = 3;
constexpr double kStepFraction = 0.99;
constexpr int kMaxIterations = 200;
constexpr double kDivergenceThreshold = 1e8;
constexpr int kStallIterations = 20;
constexpr int kPolishIterations = 5;
constexpr double kPolishFactor = 1e-3;

double InfNorm(const Vec& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

// Standard form: min 1/2 x'Px + q'x  s.t.  Ax = b,  Gx + s = h,  s in K,
// where K is a nonnegative orthant of dimension `num_linear` followed by
// second-order cones of the listed sizes.
struct StandardForm {
  SpMat p;
  Vec q;
  SpMat a;
  Vec b;
  SpMat g;
  Vec h;
  int num_linear = 0;
  std::vector<int> soc_sizes;
  std::vector<int> soc_starts;
  // Mapping back to program rows: for each equality and each cone row, the
  // program row and the sign it enters Solution::y with.
  std::vector<int> eq_row;
  std::vector<int> cone_row;
  std::vector<double> cone_sign;
  int degree() const {
    return num_linear + static_cast<int>(soc_sizes.size());
  }
};

StandardForm ToStandardForm(const ConeProgram& program) {
  StandardForm f;
  const int n = program.num_vars();
  f.p = program.ObjectiveMatrix();
  f.q = program.ObjectiveLinear();
  const SpMat rows = program.ConstraintMatrix();
  const SpMat rows_t = rows.transpose();
  const Vec offsets = program.Offsets();
  const auto row_terms = [&](int r, double sign, std::vector<Triplet>& out,
                             int target) {
    for (SpMat::InnerIterator it(rows_t, r); it; ++it) {
      out.emplace_back(target, it.row(), sign * it.value());
    }
  };

  std::vector<Triplet> a_trips;
  std::vector<double> b;
  std::vector<Triplet> g_lin;
  std::vector<double> h_lin;
  std::vector<Triplet> g_soc;
  std::vector<double> h_soc;
  std::vector<int> lin_row;
  std::vector<double> lin_sign;
  std::vector<int> soc_row;

  for (const ConeBlock& block : program.blocks()) {
    switch (block.kind) {
      case ConeKind::kZero: {
        const int r = block.first_row;
        row_terms(r, 1.0, a_trips, static_cast<int>(b.size()));
        b.push_back(program.lower()[r] - offsets(r));
        f.eq_row.push_back(r);
        break;
      }
      case ConeKind::kBox: {
        const int r = block.first_row;
        const double lo = program.lower()[r];
        const double hi = program.upper()[r];
        if (lo == hi) {
          row_terms(r, 1.0, a_trips, static_cast<int>(b.size()));
          b.push_back(lo - offsets(r));
          f.eq_row.push_back(r);
          break;
        }
        if (std::isfinite(lo)) {
          row_terms(r, -1.0, g_lin, static_cast<int>(h_lin.size()));
          h_lin.push_back(offsets(r) - lo);
          lin_row.push_back(r);
          lin_sign.push_back(-1.0);
        }
        if (std::isfinite(hi)) {
          row_terms(r, 1.0, g_lin, static_cast<int>(h_lin.size()));
          h_lin.push_back(hi - offsets(r));
          lin_row.push_back(r);
          lin_sign.push_back(1.0);
        }
        break;
      }
      case ConeKind::kSecondOrder: {
        f.soc_starts.push_back(static_cast<int>(h_soc.size()));
        f.soc_sizes.push_back(block.num_rows);
        for (int r = block.first_row; r < block.first_row + block.num_rows;
             ++r) {
          row_terms(r, -1.0, g_soc, static_cast<int>(h_soc.size()));
          h_soc.push_back(offsets(r));
          soc_row.push_back(r);
        }
        break;
      }
    }
  }

  f.num_linear = static_cast<int>(h_lin.size());
  for (int& start : f.soc_starts) start += f.num_linear;
  for (Triplet& t : g_soc) {
    g_lin.emplace_back(t.row() + f.num_linear, t.col(), t.value());
  }
  const int m = f.num_linear + static_cast<int>(h_soc.size());
  f.g.resize(m, n);
  f.g.setFromTriplets(g_lin.begin(), g_lin.end());
  f.h.resize(m);
  for (int i = 0; i < f.num_linear; ++i) f.h(i) = h_lin[i];
  for (size_t i = 0; i < h_soc.size(); ++i) f.h(f.num_linear + i) = h_soc[i];
  f.a.resize(static_cast<int>(b.size()), n);
  f.a.setFromTriplets(a_trips.begin(), a_trips.end());
  f.b = Eigen::Map<const Vec>(b.data(), static_cast<int>(b.size()));
  f.cone_row = lin_row;
  f.cone_row.insert(f.cone_row.end(), soc_row.begin(), soc_row.end());
  f.cone_sign = lin_sign;
  f.cone_sign.insert(f.cone_sign.end(), soc_row.size(), -1.0);
  return f;
}

// Nesterov-Todd scaling point for the product cone.
class Scaling {
 public:
  explicit Scaling(const StandardForm& f) : f_(f) {}

  // Returns false if s or z left the cone interior.
  bool Update(const Vec& s, const Vec& z) {
    const int l = f_.num_linear;
    d_ = (s.head(l).array() / z.head(l).array()).sqrt();
    if (!(d_.array() > 0.0).all() || !d_.allFinite()) return false;
    eta_.resize(f_.soc_sizes.size());
    w_.resize(f_.soc_sizes.size());
    for (size_t c = 0; c < f_.soc_sizes.size(); ++c) {
      const int st = f_.soc_starts[c];
      const int sz = f_.soc_sizes[c];
      const Vec sc = s.segment(st, sz);
      const Vec zc = z.segment(st, sz);
      const double sjs = sc(0) * sc(0) - sc.tail(sz - 1).squaredNorm();
      const double zjz = zc(0) * zc(0) - zc.tail(sz - 1).squaredNorm();
      if (!(sjs > 0.0 && zjz > 0.0 && sc(0) > 0.0 && zc(0) > 0.0)) {
        return false;
      }
      const Vec sb = sc / std::sqrt(sjs);
      const Vec zb = zc / std::sqrt(zjz);
      const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
      Vec w(sz);
      w(0) = (sb(0) + zb(0)) / (2.0 * gamma);
      w.tail(sz - 1) = (sb.tail(sz - 1) - zb.tail(sz - 1)) / (2.0 * gamma);
      w_[c] = w;
      eta_[c] = std::pow(sjs / zjz, 0.25);
    }
    return true;
  }

  Vec Apply(const Vec& v) const { return ApplyImpl(v, false); }
  Vec ApplyInverse(const Vec& v) const { return ApplyImpl(v, true); }

  // Triplets of -W^2 - reg I at row/col offset `offset`.
  void AppendNegativeSquare(int offset, double reg,
                            std::vector<Triplet>& out) const {
    for (int i = 0; i < f_.num_linear; ++i) {
      out.emplace_back(offset + i, offset + i, -d_(i) * d_(i) - reg);
    }
    for (size_t c = 0; c < f_.soc_sizes.size(); ++c) {
      const int st = offset + f_.soc_starts[c];
      const int sz = f_.soc_sizes[c];
      const double e2 = eta_[c] * eta_[c];
      for (int i = 0; i < sz; ++i) {
        for (int j = 0; j <= i; ++j) {
          double v = 2.0 * w_[c](i) * w_[c](j);
          if (i == j) v += (i == 0 ? -1.0 : 1.0);
          v *= e2;
          if (i == j) v += reg;
          out.emplace_back(st + i, st + j, -v);
        }
      }
    }
  }

  // W^2 v.
  Vec ApplySquare(const Vec& v) const { return Apply(Apply(v)); }

 private:
  Vec ApplyImpl(const Vec& v, bool inverse) const {
    Vec out(v.size());
    const int l = f_.num_linear;
    if (inverse) {
      out.head(l) = v.head(l).cwiseQuotient(d_);
    } else {
      out.head(l) = v.head(l).cwiseProduct(d_);
    }
    for (size_t c = 0; c < f_.soc_sizes.size(); ++c) {
      const int st = f_.soc_starts[c];
      const int sz = f_.soc_sizes[c];
      const Vec& w = w_[c];
      const double w0 = w(0);
      const auto w1 = w.tail(sz - 1);
      const double v0 = v(st);
      const auto v1 = v.segment(st + 1, sz - 1);
      const double w1v1 = w1.dot(v1);
      if (!inverse) {
        out(st) = eta_[c] * (w0 * v0 + w1v1);
        out.segment(st + 1, sz - 1) =
            eta_[c] * (v1 + (v0 + w1v1 / (1.0 + w0)) * w1);
      } else {
        out(st) = (w0 * v0 - w1v1) / eta_[c];
        out.segment(st + 1, sz - 1) =
            (v1 + (-v0 + w1v1 / (1.0 + w0)) * w1) / eta_[c];
      }
    }
    return out;
  }

  const StandardForm& f_;
  Vec d_;
  std::vector<double> eta_;
  std::vector<Vec> w_;
};

// Jordan product x o y.
Vec Product(const StandardForm& f, const Vec& x, const Vec& y) {
  Vec out(x.size());
  const int l = f.num_linear;
  out.head(l) = x.head(l).cwiseProduct(y.head(l));
  for (size_t c = 0; c < f.soc_sizes.size(); ++c) {
    const int st = f.soc_starts[c];
    const int sz = f.soc_sizes[c];
    out(st) = x.segment(st, sz).dot(y.segment(st, sz));
    out.segment(st + 1, sz - 1) = x(st) * y.segment(st + 1, sz - 1) +
                                  y(st) * x.segment(st + 1, sz - 1);
  }
  return out;
}

// Solves lambda o u = v for u.
Vec Divide(const StandardForm& f, const Vec& lambda, const Vec& v) {
  Vec out(v.size());
  const int l = f.num_linear;
  out.head(l) = v.head(l).cwiseQuotient(lambda.head(l));
  for (size_t c = 0; c < f.soc_sizes.size(); ++c) {
    const int st = f.soc_starts[c];
    const int sz = f.soc_sizes[c];
    const double l0 = lambda(st);
    const auto l1 = lambda.segment(st + 1, sz - 1);
    const double det = l0 * l0 - l1.squaredNorm();
    const double u0 = (l0 * v(st) - l1.dot(v.segment(st + 1, sz - 1))) / det;
    out(st) = u0;
    out.segment(st + 1, sz - 1) = (v.segment(st + 1, sz - 1) - u0 * l1) / l0;
  }
  return out;
}

// Identity element of the product cone.
Vec Identity(const StandardForm& f) {
  Vec e = Vec::Zero(f.h.size());
  e.head(f.num_linear).setOnes();
  for (int st : f.soc_starts) e(st) = 1.0;
  return e;
}

// Largest step t >= 0 keeping x + t d in the cone (kInf if unbounded).
double MaxStep(const StandardForm& f, const Vec& x, const Vec& d) {
  double t = kInf;
  for (int i = 0; i < f.num_linear; ++i) {
    if (d(i) < 0.0) t = std::min(t, -x(i) / d(i));
  }
  for (size_t c = 0; c < f.soc_sizes.size(); ++c) {
    const int st = f.soc_starts[c];
    const int sz = f.soc_sizes[c];
    const double x0 = x(st);
    const double d0 = d(st);
    const auto x1 = x.segment(st + 1, sz - 1);
    const auto d1 = d.segment(st + 1, sz - 1);
    // (x0 + t d0)^2 - |x1 + t d1|^2 = qa t^2 + 2 qb t + qc.
    const double qa = d0 * d0 - d1.squaredNorm();
    const double qb = x0 * d0 - x1.dot(d1);
    const double qc = x0 * x0 - x1.squaredNorm();
    double root = kInf;
    if (std::abs(qa) < 1e-14 * (d0 * d0 + d1.squaredNorm())) {
      if (qb < 0.0) root = -qc / (2.0 * qb);
    } else {
      const double disc = qb * qb - qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        // Numerically stable roots of qa t^2 + 2 qb t + qc.
        const double k = -qb - std::copysign(sq, qb);
        const double r1 = k / qa;
        const double r2 = k != 0.0 ? qc / k : kInf;
        for (double r : {r1, r2}) {
          if (r > 0.0) root = std::min(root, r);
        }
      }
    }
    if (d0 < 0.0) root = std::min(root, -x0 / d0);
    t = std::min(t, root);
  }
  return t;
}

// Smallest t with x + t e in the cone interior boundary.
double ConeDepth(const StandardForm& f, const Vec& x) {
  double t = -kInf;
  for (int i = 0; i < f.num_linear; ++i) t = std::max(t, -x(i));
  for (size_t c = 0; c < f.soc_sizes.size(); ++c) {
    const int st = f.soc_starts[c];
    const int sz = f.soc_sizes[c];
    t = std::max(t, x.segment(st + 1, sz - 1).norm() - x(st));
  }
  return t;
}

class KktSolver {
 public:
  KktSolver(const StandardForm& f) : f_(f) {
    n_ = static_cast<int>(f.q.size());
    p_ = static_cast<int>(f.b.size());
    m_ = static_cast<int>(f.h.size());
    for (int j = 0; j < f.p.outerSize(); ++j) {
      for (SpMat::InnerIterator it(f.p, j); it; ++it) {
        if (it.row() >= it.col()) fixed_.emplace_back(it.row(), it.col(), it.value());
      }
    }
    for (int j = 0; j < f.a.outerSize(); ++j) {
      for (SpMat::InnerIterator it(f.a, j); it; ++it) {
        fixed_.emplace_back(n_ + it.row(), it.col(), it.value());
      }
    }
    for (int j = 0; j < f.g.outerSize(); ++j) {
      for (SpMat::InnerIterator it(f.g, j); it; ++it) {
        fixed_.emplace_back(n_ + p_ + it.row(), it.col(), it.value());
      }
    }
  }

  // Retries with stronger regularization when a pivot vanishes.
  absl::Status Factor(const Scaling& w) {
    scaling_ = &w;
    for (double reg = kRegularization; reg <= kMaxRegularization; reg *= 100.0) {
      std::vector<Triplet> trips = fixed_;
      for (int i = 0; i < n_; ++i) trips.emplace_back(i, i, reg);
      for (int i = 0; i < p_; ++i) trips.emplace_back(n_ + i, n_ + i, -reg);
      w.AppendNegativeSquare(n_ + p_, reg, trips);
      SpMat k(n_ + p_ + m_, n_ + p_ + m_);
      k.setFromTriplets(trips.begin(), trips.end());
      if (!analyzed_) {
        ldlt_.analyzePattern(k);
        analyzed_ = true;
      }
      ldlt_.factorize(k);
      if (ldlt_.info() == Eigen::Success && ldlt_.vectorD().allFinite()) {
        return absl::OkStatus();
      }
    }
    return absl::InternalError("KKT factorization failed");
  }

  // Solves the unregularized system with iterative refinement.
  Vec Solve(const Vec& rhs) const {
    Vec sol = ldlt_.solve(rhs);
    for (int it = 0; it < kRefinementSteps; ++it) {
      const Vec r = rhs - Multiply(sol);
      if (InfNorm(r) <= 1e-14 * (1.0 + InfNorm(rhs))) break;
      sol += ldlt_.solve(r);
    }
    return sol;
  }

 private:
  Vec Multiply(const Vec& v) const {
    const auto x = v.head(n_);
    const auto y = v.segment(n_, p_);
    const Vec z = v.tail(m_);
    Vec out(n_ + p_ + m_);
    out.head(n_) = f_.p.selfadjointView<Eigen::Lower>() * x +
                   f_.a.transpose() * y + f_.g.transpose() * z;
    out.segment(n_, p_) = f_.a * x;
    out.tail(m_) = f_.g * x - scaling_->ApplySquare(z);
    return out;
  }

  const StandardForm& f_;
  int n_ = 0;
  int p_ = 0;
  int m_ = 0;
  std::vector<Triplet> fixed_;
  const Scaling* scaling_ = nullptr;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt_;
  bool analyzed_ = false;
};

}  // namespace

absl::StatusOr<Solution> SolveInteriorPoint(const ConeProgram& program,
                                            const SolverSettings& settings) {
  const auto start = std::chrono::steady_clock::now();
  const StandardForm f = ToStandardForm(program);
  const int n = program.num_vars();
  const int np = static_cast<int>(f.b.size());
  const int m = static_cast<int>(f.h.size());
  const SpMat p_full = program.ObjectiveMatrix();

  Scaling scaling(f);
  KktSolver kkt(f);
  const Vec e = Identity(f);

  // Initial point from the least-squares system with identity scaling.
  if (!scaling.Update(e, e)) return absl::InternalError("bad cone identity");
  if (absl::Status s = kkt.Factor(scaling); !s.ok()) return s;
  Vec rhs(n + np + m);
  rhs << -f.q, f.b, f.h;
  Vec sol = kkt.Solve(rhs);
  Vec x = sol.head(n);
  Vec y = sol.segment(n, np);
  Vec z = sol.tail(m);
  Vec s = -z;
  if (m > 0) {
    const double ts = ConeDepth(f, s);
    if (ts >= -1e-8 * std::max(1.0, InfNorm(s))) s += (1.0 + ts) * e;
    const double tz = ConeDepth(f, z);
    if (tz >= -1e-8 * std::max(1.0, InfNorm(z))) z += (1.0 + tz) * e;
  }

  Solution out;
  out.status = SolveStatus::kMaxIterations;
  const int max_iters = std::min(settings.max_iters, kMaxIterations);
  double best_primal = kInf;
  int stall = 0;
  int iter = 0;
  int polish = 0;
  // Last iterate meeting the requested tolerances.
  struct Kept {
    Vec x, y, z;
    double primal = 0.0;
    double dual = 0.0;
    int iter = 0;
  } kept;
  const auto record = [&](const Vec& xs) {
    double primal = 0.0;
    bool primal_ok = true;
    for (const ConeBlock& b : program.blocks()) {
      const double violation = program.BlockViolation(b, xs);
      const double scale = program.BlockScale(b);
      primal = std::max(primal, violation / scale);
      if (violation > settings.feas_tol * scale) primal_ok = false;
    }
    return std::make_pair(primal, primal_ok);
  };

  for (iter = 0; iter <= max_iters; ++iter) {
    const Vec px = p_full * x;
    const Vec aty = f.a.transpose() * y;
    const Vec gtz = f.g.transpose() * z;
    const Vec rx = px + f.q + aty + gtz;
    const Vec ry = f.a * x - f.b;
    const Vec rz = f.g * x + s - f.h;
    const double gap = m > 0 ? s.dot(z) : 0.0;
    const double mu = m > 0 ? gap / f.degree() : 0.0;

    const auto [primal, primal_ok] = record(x);
    const double dual_scale =
        1.0 + std::max({InfNorm(px), InfNorm(f.q), InfNorm(aty + gtz)});
    const double dual = InfNorm(rx) / dual_scale;
    const double pobj = 0.5 * x.dot(px) + f.q.dot(x);
    const double rel_gap = gap / (1.0 + std::abs(pobj));
    out.residual_history.emplace_back(iter, std::max({primal, dual, rel_gap}));
    out.primal_residual = primal;
    out.dual_residual = std::max(dual, rel_gap);
    out.iterations = iter;
    // Once the requested tolerances hold, keep going for a few iterations
    // towards a much tighter target; the extra accuracy is nearly free.
    const bool converged =
        primal_ok && dual <= settings.opt_tol && rel_gap <= settings.opt_tol;
    if (converged) {
      out.status = SolveStatus::kOptimal;
      kept = {x, y, z, out.primal_residual, out.dual_residual, iter};
      if (++polish > kPolishIterations ||
          (primal <= kPolishFactor * settings.feas_tol &&
           std::max(dual, rel_gap) <= kPolishFactor * settings.opt_tol)) {
        break;
      }
    } else if (polish > 0) {
      break;
    }
    if (iter == max_iters) break;

    if (primal < 0.99 * best_primal) {
      best_primal = primal;
      stall = 0;
    } else {
      ++stall;
    }
    const double mult = std::max(InfNorm(y), InfNorm(z));
    if (mult > kDivergenceThreshold && stall >= kStallIterations &&
        !primal_ok) {
      out.status = SolveStatus::kInfeasible;
      break;
    }
    if (settings.time_limit_s.has_value()) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        start)
              .count();
      if (elapsed > *settings.time_limit_s) {
        out.status = SolveStatus::kTimeLimit;
        break;
      }
    }

    // A numerical breakdown with diverging multipliers and a persistent
    // primal residual is reported as infeasibility.
    if (!scaling.Update(s, z) || !kkt.Factor(scaling).ok()) {
      if (mult > kDivergenceThreshold && !primal_ok) {
        out.status = SolveStatus::kInfeasible;
      }
      break;
    }
    const Vec lambda = scaling.Apply(z);

    // Solves for a direction given the complementarity target d_s.
    const auto direction = [&](const Vec& ds_target, Vec& dx, Vec& dy, Vec& dz,
                               Vec& ds) {
      const Vec u = Divide(f, lambda, ds_target);
      const Vec wu = scaling.Apply(u);
      Vec r(n + np + m);
      r << -rx, -ry, -rz - wu;
      const Vec d = kkt.Solve(r);
      dx = d.head(n);
      dy = d.segment(n, np);
      dz = d.tail(m);
      ds = wu - scaling.ApplySquare(dz);
    };

    Vec dx, dy, dz, ds;
    const Vec lambda_sq = Product(f, lambda, lambda);
    direction(-lambda_sq, dx, dy, dz, ds);
    double step = std::min(1.0, std::min(MaxStep(f, s, ds), MaxStep(f, z, dz)));
    double sigma = 0.0;
    if (m > 0) {
      const double gap_aff = (s + step * ds).dot(z + step * dz);
      sigma = std::pow(std::clamp(gap_aff / gap, 0.0, 1.0), 3);
      const Vec corr = Product(f, scaling.ApplyInverse(ds), scaling.Apply(dz));
      direction(-lambda_sq - corr + sigma * mu * e, dx, dy, dz, ds);
      step = std::min(1.0, kStepFraction * std::min(MaxStep(f, s, ds),
                                                     MaxStep(f, z, dz)));
    }
    x += step * dx;
    y += step * dy;
    z += step * dz;
    s += step * ds;
  }

  if (out.status == SolveStatus::kOptimal) {
    x = kept.x;
    y = kept.y;
    z = kept.z;
    out.primal_residual = kept.primal;
    out.dual_residual = kept.dual;
    out.iterations = kept.iter;
  }
  out.x = x;
  out.y = Vec::Zero(program.num_rows());
  for (int i = 0; i < np; ++i) out.y(f.eq_row[i]) += y(i);
  for (int i = 0; i < m; ++i) out.y(f.cone_row[i]) += f.cone_sign[i] * z(i);
  out.objective_value = program.Objective(x);
  return out;
}

}  // namespace ces::internal
