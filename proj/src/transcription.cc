// Copyright 2026 The rodplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rodplan/transcription.h"

#include "feasibility_kernel.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace rodplan {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

constexpr double kInf = std::numeric_limits<double>::infinity();

MatrixXd position_grid(const VectorXd& x, const DecisionLayout& lay, int k) {
  MatrixXd g(lay.m() + 1, lay.n() + 1);
  for (int i = 0; i <= lay.m(); ++i)
    for (int j = 0; j <= lay.n(); ++j) g(i, j) = x(lay.position_index(i, j, k));
  return g;
}

MatrixXd angle_grid(const VectorXd& x, const DecisionLayout& lay, int a) {
  MatrixXd g(lay.m() + 1, lay.n() + 1);
  for (int i = 0; i <= lay.m(); ++i)
    for (int j = 0; j <= lay.n(); ++j) g(i, j) = x(lay.angle_index(a, i, j));
  return g;
}

internal::FeasibilityKernel::Grids position_grids(const VectorXd& x, const DecisionLayout& lay) {
  return {position_grid(x, lay, 0), position_grid(x, lay, 1), position_grid(x, lay, 2)};
}

internal::FeasibilityKernel::Grids angle_grids(const VectorXd& x, const DecisionLayout& lay) {
  return {angle_grid(x, lay, 0), angle_grid(x, lay, 1), angle_grid(x, lay, 2)};
}

double tip_term(const CostSpec& c, const Eigen::Vector3d& p, double phi, double theta,
                double psi) {
  return c.w1 * (p - c.p_des).squaredNorm() + c.w2 * (phi - c.phi_des) * (phi - c.phi_des) +
         c.w3 * (theta - c.theta_des) * (theta - c.theta_des) +
         c.w4 * (psi - c.psi_des) * (psi - c.psi_des);
}

double scale_or_one(double bound) {
  const double sq = bound * bound;
  return sq > 0.0 ? sq : 1.0;
}

}  // namespace

DecisionLayout::DecisionLayout(int m, int n) : m_(m), n_(n) {
  if (m < 0 || n < 0) throw std::invalid_argument("orders must be nonnegative");
}

int DecisionLayout::field_index(PoseField field, int i, int j) const {
  const int f = static_cast<int>(field);
  return f < 3 ? position_index(i, j, f) : angle_index(f - 3, i, j);
}

VectorXd DecisionLayout::pack(const PoseSurfaces& pose) const {
  pose.validate();
  if (pose.m() != m_ || pose.n() != n_) {
    throw std::invalid_argument("pack: pose orders do not match the layout");
  }
  VectorXd x(size());
  for (int i = 0; i <= m_; ++i)
    for (int j = 0; j <= n_; ++j) {
      for (int k = 0; k < 3; ++k) x(position_index(i, j, k)) = pose.p.component(k)(i, j);
      x(angle_index(0, i, j)) = pose.phi.component(0)(i, j);
      x(angle_index(1, i, j)) = pose.theta.component(0)(i, j);
      x(angle_index(2, i, j)) = pose.psi.component(0)(i, j);
    }
  x(duration_index()) = pose.duration();
  return x;
}

PoseSurfaces DecisionLayout::unpack(const VectorXd& x, double L) const {
  if (x.size() != size()) throw std::invalid_argument("unpack: dimension mismatch");
  const Interval sd{0.0, L};
  const Interval td{0.0, x(duration_index())};
  return PoseSurfaces{
      BernsteinSurface({position_grid(x, *this, 0), position_grid(x, *this, 1),
                        position_grid(x, *this, 2)},
                       sd, td),
      BernsteinSurface({angle_grid(x, *this, 0)}, sd, td),
      BernsteinSurface({angle_grid(x, *this, 1)}, sd, td),
      BernsteinSurface({angle_grid(x, *this, 2)}, sd, td)};
}

double cost(const VectorXd& x, const DecisionLayout& lay, double L, const CostSpec& spec) {
  const int m = lay.m();
  const int n = lay.n();
  const double T = x(lay.duration_index());
  double total = 0.0;
  if (spec.running) {
    const double w = (L / (m + 1)) * (T / (n + 1));
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= n; ++j) {
        const Eigen::Vector3d p(x(lay.position_index(i, j, 0)), x(lay.position_index(i, j, 1)),
                                x(lay.position_index(i, j, 2)));
        total += w * spec.running(p, x(lay.angle_index(0, i, j)), x(lay.angle_index(1, i, j)),
                                  x(lay.angle_index(2, i, j)));
      }
  } else {
    const double w = T / (n + 1);
    for (int j = 0; j <= n; ++j) {
      const Eigen::Vector3d p(x(lay.position_index(m, j, 0)), x(lay.position_index(m, j, 1)),
                              x(lay.position_index(m, j, 2)));
      total += w * tip_term(spec, p, x(lay.angle_index(0, m, j)), x(lay.angle_index(1, m, j)),
                            x(lay.angle_index(2, m, j)));
    }
  }
  return total + spec.w_time * T;
}

VectorXd cost_gradient(const VectorXd& x, const DecisionLayout& lay, double L,
                       const CostSpec& spec) {
  const int m = lay.m();
  const int n = lay.n();
  const double T = x(lay.duration_index());
  VectorXd g = VectorXd::Zero(x.size());
  if (spec.running) {
    const double w = (L / (m + 1)) * (T / (n + 1));
    double sum = 0.0;
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= n; ++j) {
        std::array<int, 6> idx = {lay.position_index(i, j, 0), lay.position_index(i, j, 1),
                                  lay.position_index(i, j, 2), lay.angle_index(0, i, j),
                                  lay.angle_index(1, i, j),    lay.angle_index(2, i, j)};
        std::array<double, 6> args;
        for (int k = 0; k < 6; ++k) args[k] = x(idx[k]);
        auto eval = [&](const std::array<double, 6>& a) {
          return spec.running(Eigen::Vector3d(a[0], a[1], a[2]), a[3], a[4], a[5]);
        };
        sum += eval(args);
        for (int k = 0; k < 6; ++k) {
          const double h = 1e-6 * (1.0 + std::abs(args[k]));
          auto up = args, dn = args;
          up[k] += h;
          dn[k] -= h;
          g(idx[k]) = w * (eval(up) - eval(dn)) / (2.0 * h);
        }
      }
    g(lay.duration_index()) = (L / (m + 1)) / (n + 1) * sum;
  } else {
    const double w = T / (n + 1);
    double sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      Eigen::Vector3d p;
      for (int k = 0; k < 3; ++k) p(k) = x(lay.position_index(m, j, k));
      const double phi = x(lay.angle_index(0, m, j));
      const double theta = x(lay.angle_index(1, m, j));
      const double psi = x(lay.angle_index(2, m, j));
      sum += tip_term(spec, p, phi, theta, psi);
      for (int k = 0; k < 3; ++k)
        g(lay.position_index(m, j, k)) = w * 2.0 * spec.w1 * (p(k) - spec.p_des(k));
      g(lay.angle_index(0, m, j)) = w * 2.0 * spec.w2 * (phi - spec.phi_des);
      g(lay.angle_index(1, m, j)) = w * 2.0 * spec.w3 * (theta - spec.theta_des);
      g(lay.angle_index(2, m, j)) = w * 2.0 * spec.w4 * (psi - spec.psi_des);
    }
    g(lay.duration_index()) = sum / (n + 1);
  }
  g(lay.duration_index()) += spec.w_time;
  return g;
}

RodPlanningProblem::RodPlanningProblem(TranscriptionConfig config)
    : config_(std::move(config)), layout_(config_.m, config_.n) {
  const int m = config_.m;
  const int n = config_.n;
  if (m < 2 || n < 2) throw std::invalid_argument("transcription needs orders m, n >= 2");
  if (config_.m_e < m || config_.n_e < n) {
    throw std::invalid_argument("elevated orders must not be below (m, n)");
  }
  if (!(config_.L > 0.0)) throw std::invalid_argument("rod length must be > 0");
  terms_ = boundary_terms(m, n, config_.boundary);
  kernel_ = std::make_unique<internal::FeasibilityKernel>(m, n, config_.m_e, config_.n_e,
                                                          config_.L, config_.bounds);
  num_feasibility_ = kFeasibilityFamilies * (2 * config_.m_e + 1) * (2 * config_.n_e + 1);

  const int dim = layout_.size();
  bounds_.lower = VectorXd::Constant(dim, -kInf);
  bounds_.upper = VectorXd::Constant(dim, kInf);
  bounds_.lower(layout_.duration_index()) = config_.T_min;
  bounds_.upper(layout_.duration_index()) = config_.T_max;

  if (config_.fix_pinned_variables) {
    std::vector<std::optional<double>> pin(dim);
    auto assign = [&](int idx, double value) {
      if (!pin[idx]) {
        pin[idx] = value;
        return true;
      }
      if (std::abs(*pin[idx] - value) > 1e-12) conflicting_pins_ = true;
      return false;
    };
    for (const auto& t : terms_) {
      if (t.ref_j < 0) assign(layout_.field_index(t.field, t.i, t.j), t.target);
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& t : terms_) {
        if (t.ref_j < 0) continue;
        const int a = layout_.field_index(t.field, t.i, t.j);
        const int b = layout_.field_index(t.field, t.i, t.ref_j);
        if (pin[b]) changed |= assign(a, *pin[b]);
        if (pin[a]) changed |= assign(b, *pin[a]);
      }
    }
    for (int k = 0; k < dim; ++k) {
      if (pin[k]) bounds_.lower(k) = bounds_.upper(k) = *pin[k];
    }
  }
  // An empty box signals infeasibility before any iteration.
  if (conflicting_pins_ || config_.bounds.first_invalid_field()) {
    bounds_.lower(layout_.duration_index()) = 1.0;
    bounds_.upper(layout_.duration_index()) = 0.0;
  }
  for (int k = 0; k < dim; ++k) {
    if (bounds_.lower(k) < bounds_.upper(k)) free_.push_back(k);
  }
}

RodPlanningProblem::~RodPlanningProblem() = default;

double RodPlanningProblem::cost(const VectorXd& x) const {
  return rodplan::cost(x, layout_, config_.L, config_.cost);
}

VectorXd RodPlanningProblem::cost_gradient(const VectorXd& x) const {
  return rodplan::cost_gradient(x, layout_, config_.L, config_.cost);
}

VectorXd RodPlanningProblem::equalities(const VectorXd& x) const {
  const auto r = boundary_residuals(layout_.unpack(x, config_.L), config_.boundary);
  return Eigen::Map<const VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
}

VectorXd RodPlanningProblem::equality_jacobian_transpose(const VectorXd& x,
                                                         const VectorXd& w) const {
  VectorXd g = VectorXd::Zero(x.size());
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    g(layout_.field_index(t.field, t.i, t.j)) += w(k);
    if (t.ref_j >= 0) g(layout_.field_index(t.field, t.i, t.ref_j)) -= w(k);
  }
  return g;
}

VectorXd RodPlanningProblem::feasibility(const VectorXd& x) const {
  return kernel_->residuals(position_grids(x, layout_), angle_grids(x, layout_),
                            x(layout_.duration_index()));
}

std::vector<SurfaceWitness> RodPlanningProblem::witnesses(const VectorXd& x) const {
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    if (witness_x_.size() == x.size() && witness_x_ == x) return witness_value_;
  }
  std::vector<SurfaceWitness> out;
  out.reserve(config_.obstacles.size());
  if (!config_.obstacles.empty()) {
    const BernsteinSurface p = layout_.unpack(x, config_.L).p;
    for (const auto& obstacle : config_.obstacles) {
      SeparationQuery q;
      q.surface = &p;
      q.obstacle = &obstacle;
      // A loose tolerance can land the refinement in a slightly worse basin,
      // which makes the residual jump between nearby x.
      q.epsilon = std::min(config_.epsilon, 1e-9);
      q.d_safe = config_.d_safe;
      q.max_depth = std::max(config_.max_depth, 60);
      SurfaceWitness w;
      try {
        const MinDistResult r = min_dist(q);
        w = refine_witness(p, obstacle, r.s, r.t);
      } catch (const MinDistDepthError& e) {
        // Only reachable on contact; report the certified bracket floor.
        w.distance = e.lower();
      }
      out.push_back(w);
    }
  }
  std::lock_guard<std::mutex> lock(cache_mu_);
  witness_x_ = x;
  witness_value_ = out;
  return out;
}

VectorXd RodPlanningProblem::clearance(const VectorXd& x) const {
  const auto ws = witnesses(x);
  VectorXd out(ws.size());
  for (std::size_t o = 0; o < ws.size(); ++o) out(o) = ws[o].distance - config_.d_safe;
  return out;
}

// The distance is a minimum over the surface, so its derivative with respect
// to a control point is the outward normal weighted by that point's basis
// function at the witness. T only rescales the domain and drops out.
MatrixXd RodPlanningProblem::clearance_jacobian(const VectorXd& x) const {
  const auto ws = witnesses(x);
  const int m = config_.m;
  const int n = config_.n;
  const double T = x(layout_.duration_index());
  MatrixXd jac = MatrixXd::Zero(ws.size(), x.size());
  for (std::size_t o = 0; o < ws.size(); ++o) {
    const auto& w = ws[o];
    if (w.normal.isZero()) continue;
    const double us = w.s / config_.L;
    const double ut = w.t / T;
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= n; ++j)
        for (int k = 0; k < 3; ++k) {
          const int idx = layout_.position_index(i, j, k);
          if (bounds_.lower(idx) < bounds_.upper(idx)) {
            jac(o, idx) = w.normal(k) * bernstein_basis(m, i, us) * bernstein_basis(n, j, ut);
          }
        }
  }
  return jac;
}

VectorXd RodPlanningProblem::inequalities(const VectorXd& x) const {
  VectorXd out(num_inequalities());
  out.head(num_feasibility_) = feasibility(x);
  if (!config_.obstacles.empty()) {
    out.tail(config_.obstacles.size()) = clearance(x);
  }
  return out;
}

VectorXd RodPlanningProblem::inequality_jacobian_transpose(const VectorXd& x,
                                                           const VectorXd& w) const {
  VectorXd g = feasibility_jacobian_transpose(x, w.head(num_feasibility_));
  const int nobs = static_cast<int>(config_.obstacles.size());
  if (nobs > 0) {
    const VectorXd wo = w.tail(nobs);
    if (wo.lpNorm<Eigen::Infinity>() > 0.0) g += clearance_jacobian(x).transpose() * wo;
  }
  return g;
}

VectorXd RodPlanningProblem::inequality_scales() const {
  const FeasibilityBounds& b = config_.bounds;
  const double fam[kFeasibilityFamilies] = {
      scale_or_one(b.v_min),     scale_or_one(b.v_max),   scale_or_one(b.q_max),
      scale_or_one(b.u_max),     scale_or_one(b.omega_max), scale_or_one(b.v_s_max),
      scale_or_one(b.q_t_max)};
  VectorXd s(num_inequalities());
  const int block = num_feasibility_ / kFeasibilityFamilies;
  for (int f = 0; f < kFeasibilityFamilies; ++f) s.segment(f * block, block).setConstant(fam[f]);
  for (std::size_t o = 0; o < config_.obstacles.size(); ++o) {
    s(num_feasibility_ + static_cast<int>(o)) = std::max(config_.d_safe, 1e-3);
  }
  return s;
}

VectorXd RodPlanningProblem::feasibility_jacobian_transpose(const VectorXd& x,
                                                            const VectorXd& w) const {
  const auto g = kernel_->pullback(position_grids(x, layout_), angle_grids(x, layout_),
                                   x(layout_.duration_index()), w);
  VectorXd grad = VectorXd::Zero(x.size());
  for (int i = 0; i <= config_.m; ++i)
    for (int j = 0; j <= config_.n; ++j)
      for (int k = 0; k < 3; ++k) {
        grad(layout_.position_index(i, j, k)) = g.p[k](i, j);
        grad(layout_.angle_index(k, i, j)) = g.a[k](i, j);
      }
  grad(layout_.duration_index()) = g.T;
  return grad;
}

MatrixXd RodPlanningProblem::equality_jacobian(const VectorXd& x) const {
  MatrixXd jac(num_equalities(), x.size());
  for (int r = 0; r < num_equalities(); ++r) {
    jac.row(r) = equality_jacobian_transpose(x, VectorXd::Unit(num_equalities(), r)).transpose();
  }
  return jac;
}

MatrixXd RodPlanningProblem::inequality_jacobian(const VectorXd& x) const {
  MatrixXd jac = MatrixXd::Zero(num_inequalities(), x.size());
  const auto P = position_grids(x, layout_);
  const auto A = angle_grids(x, layout_);
  const double T = x(layout_.duration_index());
  const VariableBounds& vb = bounds_;
  auto is_free = [&](int idx) { return vb.lower(idx) < vb.upper(idx); };
  for (int i = 0; i <= config_.m; ++i)
    for (int j = 0; j <= config_.n; ++j)
      for (int k = 0; k < 3; ++k) {
        const int pi = layout_.position_index(i, j, k);
        if (is_free(pi)) jac.col(pi).head(num_feasibility_) = kernel_->position_column(P, T, i, j, k);
        const int ai = layout_.angle_index(k, i, j);
        if (is_free(ai)) jac.col(ai).head(num_feasibility_) = kernel_->angle_column(A, T, i, j, k);
      }
  const int ti = layout_.duration_index();
  if (is_free(ti)) jac.col(ti).head(num_feasibility_) = kernel_->duration_column(P, A, T);
  if (!config_.obstacles.empty()) {
    jac.bottomRows(config_.obstacles.size()) = clearance_jacobian(x);
  }
  return jac;
}

MatrixXd RodPlanningProblem::lagrangian_hessian(const VectorXd& x, double sigma,
                                                const VectorXd& w_e,
                                                const VectorXd& w_i) const {
  // Equalities are linear, so w_e drops out.
  (void)w_e;
  const int dim = static_cast<int>(x.size());
  const int ti = layout_.duration_index();
  const double T = x(ti);
  const VectorXd wf = w_i.head(num_feasibility_);
  MatrixXd h = MatrixXd::Zero(dim, dim);

  // The cost is cheap; difference its gradient.
  VectorXd xp = x, xm = x;
  for (int idx : free_) {
    const double step = 1e-5 * (1.0 + std::abs(x(idx)));
    xp(idx) = x(idx) + step;
    xm(idx) = x(idx) - step;
    h.col(idx) = sigma * (cost_gradient(xp) - cost_gradient(xm)) / (xp(idx) - xm(idx));
    xp(idx) = xm(idx) = x(idx);
  }

  if (wf.lpNorm<Eigen::Infinity>() > 0.0) {
    const MatrixXd hp = kernel_->position_hessian_block(T, wf);
    const MatrixXd ha = kernel_->angle_hessian_block(T, wf);
    const int cols = config_.n + 1;
    const int cells = (config_.m + 1) * cols;
    for (int c = 0; c < cells; ++c)
      for (int r = 0; r < cells; ++r) {
        const int ir = r / cols, jr = r % cols, ic = c / cols, jc = c % cols;
        for (int k = 0; k < 3; ++k) {
          h(layout_.position_index(ir, jr, k), layout_.position_index(ic, jc, k)) += hp(r, c);
          h(layout_.angle_index(k, ir, jr), layout_.angle_index(k, ic, jc)) += ha(r, c);
        }
      }
    if (bounds_.lower(ti) < bounds_.upper(ti)) {
      const double step = 1e-5 * (1.0 + std::abs(T));
      xp(ti) = T + step;
      xm(ti) = T - step;
      const VectorXd col = (feasibility_jacobian_transpose(xp, wf) -
                            feasibility_jacobian_transpose(xm, wf)) /
                           (xp(ti) - xm(ti));
      xp(ti) = xm(ti) = T;
      h.col(ti) += col;
      h.row(ti) += col.transpose();
      h(ti, ti) -= col(ti);
    }
  }
  for (int k = 0; k < dim; ++k) {
    if (!(bounds_.lower(k) < bounds_.upper(k))) {
      h.row(k).setZero();
      h.col(k).setZero();
    }
  }
  return 0.5 * (h + h.transpose());
}

namespace {

VectorXd blended_guess(const TranscriptionConfig& cfg, const DecisionLayout& lay,
                       const MatrixXd& p0, const MatrixXd& a0, const MatrixXd& p1,
                       const MatrixXd& a1, double fraction, double T) {
  VectorXd x(lay.size());
  const int m = cfg.m;
  const int n = cfg.n;
  const bool rest = cfg.boundary.rest_start;
  for (int j = 0; j <= n; ++j) {
    double beta = rest ? (j <= 1 ? 0.0 : double(j - 1) / (n - 1)) : double(j) / n;
    beta *= fraction;
    for (int i = 0; i <= m; ++i) {
      for (int k = 0; k < 3; ++k) {
        x(lay.position_index(i, j, k)) = (1.0 - beta) * p0(i, k) + beta * p1(i, k);
        x(lay.angle_index(k, i, j)) = (1.0 - beta) * a0(i, k) + beta * a1(i, k);
      }
    }
  }
  x(lay.duration_index()) = T;
  return x;
}

}  // namespace

VectorXd initial_guess(const TranscriptionConfig& cfg) {
  const DecisionLayout lay(cfg.m, cfg.n);
  const int m = cfg.m;
  const MatrixXd& p0 = cfg.boundary.initial_position.control_points();
  const MatrixXd& a0 = cfg.boundary.initial_angles.control_points();
  if (p0.rows() != m + 1 || a0.rows() != m + 1) {
    throw std::invalid_argument("initial edge order does not match m");
  }
  const CostSpec& c = cfg.cost;
  const Eigen::Vector3d tip0 = p0.row(m).transpose();
  const Eigen::Vector3d ang_des(c.phi_des, c.theta_des, c.psi_des);
  const Eigen::Vector3d ang_tip0 = a0.row(m).transpose();

  MatrixXd p1(m + 1, 3), a1(m + 1, 3);
  if ((c.p_des - tip0).norm() <= 1e-12 && (ang_des - ang_tip0).norm() <= 1e-12) {
    p1 = p0;
    a1 = a0;
  } else {
    const double reach = c.p_des.norm();
    const Eigen::Vector3d dir =
        reach > 1e-12 ? Eigen::Vector3d(c.p_des / reach) : Eigen::Vector3d::UnitZ();
    double stretch = 1.0;
    const FeasibilityBounds& b = cfg.bounds;
    if (!b.first_invalid_field()) {
      const double margin = 0.1 * (b.v_max - b.v_min);
      stretch = std::clamp(reach / cfg.L, b.v_min + margin, b.v_max - margin);
    }
    for (int i = 0; i <= m; ++i) {
      const double frac = double(i) / m;
      p1.row(i) = (frac * cfg.L * stretch * dir).transpose();
      a1.row(i) = (frac * ang_des).transpose();
    }
  }

  double T = cfg.T_min;
  if (cfg.bounds.q_max > 0.0) {
    T = std::clamp((c.p_des - tip0).norm() / cfg.bounds.q_max, cfg.T_min,
                   std::max(cfg.T_min, cfg.T_max));
  }

  if (cfg.obstacles.empty()) return blended_guess(cfg, lay, p0, a0, p1, a1, 1.0, T);
  VectorXd x;
  for (double fraction : {1.0, 0.5, 0.25, 0.125, 0.0}) {
    x = blended_guess(cfg, lay, p0, a0, p1, a1, fraction, T);
    const BernsteinSurface p = lay.unpack(x, cfg.L).p;
    bool clear = true;
    for (const auto& obs : cfg.obstacles) {
      SeparationQuery q;
      q.surface = &p;
      q.obstacle = &obs;
      q.epsilon = cfg.epsilon;
      q.max_depth = cfg.max_depth;
      try {
        clear = clear && min_dist(q).distance >= cfg.d_safe;
      } catch (const MinDistDepthError&) {
        clear = false;
      }
    }
    if (clear) break;
  }
  return x;
}

SolverReport certify(const TranscriptionConfig& config, const VectorXd& x,
                     SolverReport report) {
  const DecisionLayout layout(config.m, config.n);
  const PoseSurfaces pose = layout.unpack(x, config.L);
  double eq = 0.0;
  for (double r : boundary_residuals(pose, config.boundary)) eq = std::max(eq, std::abs(r));
  double ineq = std::numeric_limits<double>::infinity();
  for (double r : feasibility_residuals(constraint_surfaces(pose, config.m_e, config.n_e),
                                        config.bounds)) {
    ineq = std::min(ineq, r);
  }
  for (const auto& obstacle : config.obstacles) {
    double r;
    try {
      r = clearance_constraint(pose.p, {obstacle}, config.d_safe, config.epsilon,
                               config.max_depth)[0];
    } catch (const MinDistDepthError& e) {
      r = e.lower() - config.d_safe;
    }
    ineq = std::min(ineq, r);
  }
  report.max_equality_violation = eq;
  report.min_inequality_residual = ineq;
  return report;
}

}  // namespace rodplan
