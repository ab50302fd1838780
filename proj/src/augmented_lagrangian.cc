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


#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rodplan/nlp.h"

namespace rodplan {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kMuInit = 10.0;
constexpr double kMuMax = 1e12;
constexpr double kArmijo = 1e-4;

VectorXd clamp(const VectorXd& z, const VectorXd& lo, const VectorXd& hi) {
  return z.cwiseMax(lo).cwiseMin(hi);
}

double projected_gradient_norm(const VectorXd& z, const VectorXd& g,
                               const VectorXd& lo, const VectorXd& hi) {
  if (z.size() == 0) return 0.0;
  return (clamp(z - g, lo, hi) - z).lpNorm<Eigen::Infinity>();
}

// PHR merit restricted to the free variables.
class Merit {
 public:
  Merit(const NlpProblem& problem, const VectorXd& x_fixed, std::vector<int> free_idx,
        double fscale)
      : problem_(problem),
        x_fixed_(x_fixed),
        free_(std::move(free_idx)),
        fscale_(fscale),
        iscale_(problem.inequality_scales()),
        lam_e_(VectorXd::Zero(problem.num_equalities())),
        lam_i_(VectorXd::Zero(problem.num_inequalities())) {}

  VectorXd expand(const VectorXd& z) const {
    VectorXd full = x_fixed_;
    for (std::size_t k = 0; k < free_.size(); ++k) full(free_[k]) = z(k);
    return full;
  }

  VectorXd restrict(const VectorXd& full) const {
    VectorXd z(free_.size());
    for (std::size_t k = 0; k < free_.size(); ++k) z(k) = full(free_[k]);
    return z;
  }

  double value(const VectorXd& z, VectorXd* grad) const {
    const VectorXd x = expand(z);
    double f = problem_.cost(x) / fscale_;
    VectorXd g;
    if (grad) g = problem_.cost_gradient(x) / fscale_;
    if (lam_e_.size() > 0) {
      const VectorXd ce = problem_.equalities(x);
      f += -lam_e_.dot(ce) + 0.5 * mu_ * ce.squaredNorm();
      if (grad) g += problem_.equality_jacobian_transpose(x, -lam_e_ + mu_ * ce);
    }
    if (lam_i_.size() > 0) {
      const VectorXd ci = problem_.inequalities(x).cwiseQuotient(iscale_);
      const VectorXd shifted = (lam_i_ - mu_ * ci).cwiseMax(0.0);
      f += (shifted.squaredNorm() - lam_i_.squaredNorm()) / (2.0 * mu_);
      if (grad) g += problem_.inequality_jacobian_transpose(x, -shifted.cwiseQuotient(iscale_));
    }
    if (grad) *grad = restrict(g);
    return f;
  }

  MatrixXd hessian(const VectorXd& z) const {
    const VectorXd x = expand(z);
    const int n = static_cast<int>(x.size());
    VectorXd w_e = VectorXd::Zero(lam_e_.size());
    VectorXd w_i = VectorXd::Zero(lam_i_.size());
    MatrixXd gn = MatrixXd::Zero(n, n);
    if (lam_e_.size() > 0) {
      const VectorXd ce = problem_.equalities(x);
      w_e = -lam_e_ + mu_ * ce;
      const MatrixXd je = problem_.equality_jacobian(x);
      gn.noalias() += mu_ * je.transpose() * je;
    }
    if (lam_i_.size() > 0) {
      const VectorXd ci = problem_.inequalities(x).cwiseQuotient(iscale_);
      const VectorXd shifted = (lam_i_ - mu_ * ci).cwiseMax(0.0);
      w_i = -shifted.cwiseQuotient(iscale_);
      std::vector<int> active;
      for (int k = 0; k < shifted.size(); ++k) {
        if (shifted(k) > 0.0) active.push_back(k);
      }
      if (!active.empty()) {
        const MatrixXd ji = problem_.inequality_jacobian(x);
        MatrixXd ja(active.size(), n);
        for (std::size_t r = 0; r < active.size(); ++r) {
          ja.row(r) = ji.row(active[r]) / iscale_(active[r]);
        }
        gn.noalias() += mu_ * ja.transpose() * ja;
      }
    }
    const MatrixXd full = problem_.lagrangian_hessian(x, 1.0 / fscale_, w_e, w_i) + gn;
    const int nf = static_cast<int>(free_.size());
    MatrixXd h(nf, nf);
    for (int a = 0; a < nf; ++a)
      for (int b = 0; b < nf; ++b) h(a, b) = full(free_[a], free_[b]);
    return 0.5 * (h + h.transpose());
  }

  // Constraint measure used by the multiplier update.
  double measure(const VectorXd& x) const {
    double out = lam_e_.size() > 0 ? problem_.equalities(x).lpNorm<Eigen::Infinity>() : 0.0;
    if (lam_i_.size() > 0) {
      const VectorXd ci = problem_.inequalities(x).cwiseQuotient(iscale_);
      for (int k = 0; k < ci.size(); ++k) {
        out = std::max(out, std::abs(std::min(ci(k), lam_i_(k) / mu_)));
      }
    }
    return out;
  }

  void update_multipliers(const VectorXd& x) {
    if (lam_e_.size() > 0) lam_e_ -= mu_ * problem_.equalities(x);
    if (lam_i_.size() > 0) {
      const VectorXd ci = problem_.inequalities(x).cwiseQuotient(iscale_);
      lam_i_ = (lam_i_ - mu_ * ci).cwiseMax(0.0);
    }
  }

  double mu() const { return mu_; }
  void set_mu(double mu) { mu_ = mu; }

 private:
  const NlpProblem& problem_;
  VectorXd x_fixed_;
  std::vector<int> free_;
  double fscale_;
  VectorXd iscale_;
  VectorXd lam_e_;
  VectorXd lam_i_;
  double mu_ = kMuInit;
};

struct InnerResult {
  int iterations = 0;
  double projected_gradient = 0.0;
};

// Minimizer of g.d + d'Hd/2 over |d| <= radius, from the eigen-decomposition
// of H. The hard case is handled approximately by a small extra shift.
VectorXd trust_region_step(const Eigen::SelfAdjointEigenSolver<MatrixXd>& eig,
                           const VectorXd& g, double radius) {
  const VectorXd& lam = eig.eigenvalues();
  const VectorXd gt = eig.eigenvectors().transpose() * g;
  const double top = std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
  auto step_norm = [&](double shift) {
    return (gt.array() / (lam.array() + shift)).matrix().norm();
  };
  double shift = 0.0;
  const double lo_shift = std::max(0.0, -lam.minCoeff()) + 1e-12 * top;
  if (lam.minCoeff() <= 1e-12 * top || step_norm(0.0) > radius) {
    // Secular equation 1/|d(shift)| = 1/radius, bracketed then bisected in log space.
    double a = lo_shift;
    double b = std::max(2.0 * a, gt.norm() / radius + top);
    if (step_norm(a) <= radius) {
      shift = a;
    } else {
      for (int it = 0; it < 200; ++it) {
        const double mid = a > 0.0 ? std::sqrt(a * b) : 0.5 * b;
        (step_norm(mid) > radius ? a : b) = mid;
        if (b - a <= 1e-10 * b) break;
      }
      shift = b;
    }
  }
  return -eig.eigenvectors() * (gt.array() / (lam.array() + shift)).matrix();
}

// Backtracks along the projected gradient path from the trust-region edge
// until the model decrease is a fixed fraction of the linear one.
VectorXd cauchy_step(const VectorXd& z, const VectorXd& g, const MatrixXd& h,
                     const VectorXd& lo, const VectorXd& hi, double radius) {
  const double gnorm = g.norm();
  if (!(gnorm > 0.0)) return VectorXd::Zero(z.size());
  double alpha = radius / gnorm;
  VectorXd s = VectorXd::Zero(z.size());
  for (int it = 0; it < 60; ++it, alpha *= 0.5) {
    s = clamp(z - alpha * g, lo, hi) - z;
    const double linear = -g.dot(s);
    if (!(linear > 0.0)) continue;
    if (linear - 0.5 * s.dot(h * s) >= kArmijo * linear) return s;
  }
  return VectorXd::Zero(z.size());
}

// Trust-region Newton on a box. Variables sitting on a bound with the gradient
// pointing outward are held there for the step; the rest follow the
// trust-region model, and the step is projected back into the box.
InnerResult minimize_box(const Merit& merit, VectorXd& z, const VectorXd& lo,
                         const VectorXd& hi, double tol, int max_iter, double& radius) {
  InnerResult out;
  const int n = static_cast<int>(z.size());
  radius = std::max(radius, 1e-2 * (1.0 + z.lpNorm<Eigen::Infinity>()));
  VectorXd g;
  double f = merit.value(z, &g);
  MatrixXd h;
  bool fresh = false;

  for (int it = 0; it < max_iter; ++it) {
    out.projected_gradient = projected_gradient_norm(z, g, lo, hi);
    if (out.projected_gradient <= tol) return out;
    if (!fresh) {
      h = merit.hessian(z);
      fresh = true;
    }

    std::vector<int> free;
    VectorXd s = VectorXd::Zero(n);
    for (int k = 0; k < n; ++k) {
      const double eps = std::min(1e-8 * (1.0 + std::abs(z(k))), out.projected_gradient);
      if (z(k) - lo(k) <= eps && g(k) > 0.0) {
        s(k) = lo(k) - z(k);
      } else if (hi(k) - z(k) <= eps && g(k) < 0.0) {
        s(k) = hi(k) - z(k);
      } else {
        free.push_back(k);
      }
    }
    const int nf = static_cast<int>(free.size());
    if (nf > 0) {
      MatrixXd hff(nf, nf);
      VectorXd gf(nf);
      for (int a = 0; a < nf; ++a) {
        gf(a) = g(free[a]);
        for (int b = 0; b < nf; ++b) hff(a, b) = h(free[a], free[b]);
      }
      const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(hff);
      const VectorXd df = trust_region_step(eig, gf, radius);
      for (int a = 0; a < nf; ++a) s(free[a]) = df(a);
    }
    s = clamp(z + s, lo, hi) - z;
    double predicted = -(g.dot(s) + 0.5 * s.dot(h * s));
    // Projection can spoil the Newton step near a bound; fall back on the
    // projected gradient path when it does better.
    const VectorXd sc = cauchy_step(z, g, h, lo, hi, radius);
    const double predicted_c = -(g.dot(sc) + 0.5 * sc.dot(h * sc));
    if (!(predicted >= predicted_c)) {
      s = sc;
      predicted = predicted_c;
    }
    const VectorXd zn = clamp(z + s, lo, hi);
    ++out.iterations;
    const double snorm = s.norm();
    if (snorm <= 1e-14 * (1.0 + z.norm()) || !(predicted > 0.0)) break;

    VectorXd gn;
    const double fn = merit.value(zn, &gn);
    const double rho = std::isfinite(fn) ? (f - fn) / predicted : -1.0;
    if (rho < 0.25) {
      radius = 0.25 * snorm;
    } else if (rho > 0.75 && snorm >= 0.8 * radius) {
      radius = std::min(2.0 * radius, 1e6);
    }
    if (rho > 1e-4) {
      z = zn;
      f = fn;
      g = gn;
      fresh = false;
    }
    if (radius < 1e-14 * (1.0 + z.norm())) break;
  }
  out.projected_gradient = projected_gradient_norm(z, g, lo, hi);
  return out;
}

// First-order optimality of a feasible point: least-squares multipliers on
// the equalities and near-active inequalities (negative ones dropped), then
// the projected gradient of the Lagrangian over the free variables.
double kkt_residual(const NlpProblem& problem, const VectorXd& x, const std::vector<int>& free_idx,
                    const VectorXd& zlo, const VectorXd& zhi, double fscale, double active_tol) {
  const VectorXd iscale = problem.inequality_scales();
  std::vector<int> rows;
  if (problem.num_inequalities() > 0) {
    const VectorXd ci = problem.inequalities(x);
    for (int k = 0; k < ci.size(); ++k)
      if (ci(k) <= active_tol) rows.push_back(k);
  }
  const MatrixXd je = problem.equality_jacobian(x);
  const MatrixXd ji = rows.empty() ? MatrixXd(0, x.size()) : problem.inequality_jacobian(x);
  const int nf = static_cast<int>(free_idx.size());
  VectorXd z(nf), g(nf);
  const VectorXd gf = problem.cost_gradient(x) / fscale;
  for (int a = 0; a < nf; ++a) {
    z(a) = x(free_idx[a]);
    g(a) = gf(free_idx[a]);
  }
  VectorXd r = g;
  for (int round = 0; round < 10; ++round) {
    const int ne = static_cast<int>(je.rows());
    const int na = static_cast<int>(rows.size());
    if (ne + na == 0) {
      r = g;
      break;
    }
    MatrixXd a(nf, ne + na);
    for (int c = 0; c < nf; ++c) {
      for (int e = 0; e < ne; ++e) a(c, e) = je(e, free_idx[c]);
      for (int i = 0; i < na; ++i) a(c, ne + i) = ji(rows[i], free_idx[c]) / iscale(rows[i]);
    }
    // Variables pinned by an active bound carry a bound multiplier instead.
    MatrixXd a_int = a;
    VectorXd g_int = g;
    for (int c = 0; c < nf; ++c) {
      if (z(c) <= zlo(c) || z(c) >= zhi(c)) {
        a_int.row(c).setZero();
        g_int(c) = 0.0;
      }
    }
    const VectorXd lam = a_int.completeOrthogonalDecomposition().solve(g_int);
    std::vector<int> keep;
    for (int i = 0; i < na; ++i)
      if (lam(ne + i) >= 0.0) keep.push_back(rows[i]);
    r = g - a * lam;
    if (static_cast<int>(keep.size()) == na) break;
    rows = std::move(keep);
  }
  return projected_gradient_norm(z, r, zlo, zhi);
}

}  // namespace

MatrixXd NlpProblem::equality_jacobian(const VectorXd& x) const {
  const int ne = num_equalities();
  MatrixXd jac(ne, x.size());
  for (int r = 0; r < ne; ++r) {
    jac.row(r) = equality_jacobian_transpose(x, VectorXd::Unit(ne, r)).transpose();
  }
  return jac;
}

MatrixXd NlpProblem::inequality_jacobian(const VectorXd& x) const {
  const int ni = num_inequalities();
  MatrixXd jac(ni, x.size());
  for (int r = 0; r < ni; ++r) {
    jac.row(r) = inequality_jacobian_transpose(x, VectorXd::Unit(ni, r)).transpose();
  }
  return jac;
}

MatrixXd NlpProblem::lagrangian_hessian(const VectorXd& x, double sigma, const VectorXd& w_e,
                                        const VectorXd& w_i) const {
  const int n = static_cast<int>(x.size());
  const bool has_e = w_e.size() > 0 && w_e.lpNorm<Eigen::Infinity>() > 0.0;
  const bool has_i = w_i.size() > 0 && w_i.lpNorm<Eigen::Infinity>() > 0.0;
  auto grad = [&](const VectorXd& xx) {
    VectorXd g = sigma * cost_gradient(xx);
    if (has_e) g += equality_jacobian_transpose(xx, w_e);
    if (has_i) g += inequality_jacobian_transpose(xx, w_i);
    return g;
  };
  MatrixXd h(n, n);
  VectorXd xp = x, xm = x;
  for (int k = 0; k < n; ++k) {
    const double step = 1e-5 * (1.0 + std::abs(x(k)));
    xp(k) = x(k) + step;
    xm(k) = x(k) - step;
    h.col(k) = (grad(xp) - grad(xm)) / (xp(k) - xm(k));
    xp(k) = xm(k) = x(k);
  }
  return 0.5 * (h + h.transpose());
}

std::string to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::kOptimal: return "optimal";
    case SolverStatus::kFeasibleStalled: return "feasible-stalled";
    case SolverStatus::kInfeasible: return "infeasible";
    case SolverStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

bool is_feasible(SolverStatus status) {
  return status == SolverStatus::kOptimal || status == SolverStatus::kFeasibleStalled;
}

AugmentedLagrangianSolver::AugmentedLagrangianSolver(SolverOptions options)
    : options_(options) {}

SolveResult AugmentedLagrangianSolver::solve(const NlpProblem& problem,
                                             const VectorXd& x0) const {
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const int n = problem.dimension();
  if (x0.size() != n) throw std::invalid_argument("x0 has the wrong dimension");
  const VariableBounds vb = problem.bounds();

  SolveResult result;
  result.x = x0;
  SolverReport& report = result.report;

  for (int k = 0; k < n; ++k) {
    if (!(vb.lower(k) <= vb.upper(k))) {
      report.status = SolverStatus::kInfeasible;
      report.cost = std::numeric_limits<double>::quiet_NaN();
      report.wall_time = elapsed();
      return result;
    }
  }

  VectorXd x = clamp(x0, vb.lower, vb.upper);
  std::vector<int> free_idx;
  for (int k = 0; k < n; ++k) {
    if (vb.lower(k) < vb.upper(k)) free_idx.push_back(k);
  }

  const double f0 = problem.cost(x);
  if (!std::isfinite(f0)) throw std::runtime_error("non-finite cost at the initial point");
  const double fscale = std::abs(f0) > 1e-12 ? std::abs(f0) : 1.0;
  const int ne = problem.num_equalities();
  const int ni = problem.num_inequalities();

  Merit merit(problem, x, free_idx, fscale);
  VectorXd z = merit.restrict(x);
  const VectorXd zlo = merit.restrict(vb.lower);
  const VectorXd zhi = merit.restrict(vb.upper);

  auto violations = [&](const VectorXd& xf, double& eq, double& ineq_min) {
    eq = ne > 0 ? problem.equalities(xf).lpNorm<Eigen::Infinity>() : 0.0;
    ineq_min = ni > 0 ? problem.inequalities(xf).minCoeff()
                      : std::numeric_limits<double>::infinity();
  };

  {
    double eq = 0.0, ineq_min = 0.0;
    violations(x, eq, ineq_min);
    if (eq <= options_.tol_eq && ineq_min >= -options_.tol_ineq &&
        kkt_residual(problem, x, free_idx, zlo, zhi, fscale,
                     std::max(10.0 * options_.tol_ineq, 1e-5)) <= options_.tol_opt) {
      result.x = x;
      report.status = SolverStatus::kOptimal;
      report.cost = f0;
      report.max_equality_violation = eq;
      report.min_inequality_residual = ineq_min;
      report.wall_time = elapsed();
      return result;
    }
  }

  double mu = kMuInit;
  double radius = 0.1 * (1.0 + z.lpNorm<Eigen::Infinity>());
  double omega = std::max(1.0 / mu, options_.tol_opt);
  double eta = 1.0 / std::pow(mu, 0.1);
  double best_measure = std::numeric_limits<double>::infinity();
  int no_progress = 0;
  bool converged = false;
  bool gave_up = false;

  for (int outer = 0; outer < options_.max_iter; ++outer) {
    const InnerResult inner =
        minimize_box(merit, z, zlo, zhi, omega, options_.max_inner_iter, radius);
    report.iterations = outer + 1;
    report.inner_iterations += inner.iterations;
    x = merit.expand(z);

    double eq = 0.0, ineq_min = 0.0;
    violations(x, eq, ineq_min);
    const double measure = merit.measure(x);
    const bool feasible = eq <= options_.tol_eq && ineq_min >= -options_.tol_ineq;
    if (options_.verbose) {
      std::fprintf(stderr,
                   "[al] outer %3d inner %4d f %.6e eq %.2e ineq %.2e meas %.2e "
                   "pg %.2e mu %.1e\n",
                   outer, inner.iterations, problem.cost(x), eq, ineq_min, measure,
                   inner.projected_gradient, mu);
    }
    if (feasible && inner.projected_gradient <= options_.tol_opt &&
        measure <= std::max(eta, 1e-8)) {
      converged = true;
      break;
    }

    if (measure <= eta) {
      merit.update_multipliers(x);
      eta = std::max(eta / std::pow(mu, 0.9), 1e-12);
      omega = std::max(omega / mu, options_.tol_opt);
    } else {
      mu = std::min(mu * 10.0, kMuMax);
      merit.set_mu(mu);
      eta = 1.0 / std::pow(mu, 0.1);
      omega = std::max(1.0 / mu, options_.tol_opt);
    }

    if (measure < 0.9 * best_measure) {
      best_measure = measure;
      no_progress = 0;
    } else if (mu >= kMuMax && ++no_progress >= 5) {
      gave_up = true;
      break;
    }
  }

  double eq = 0.0, ineq_min = 0.0;
  violations(x, eq, ineq_min);
  const bool feasible = eq <= options_.tol_eq && ineq_min >= -options_.tol_ineq;
  result.x = x;
  report.cost = problem.cost(x);
  report.max_equality_violation = eq;
  report.min_inequality_residual = ineq_min;
  if (converged) {
    report.status = SolverStatus::kOptimal;
  } else if (feasible) {
    report.status = SolverStatus::kFeasibleStalled;
  } else {
    report.status = gave_up ? SolverStatus::kInfeasible : SolverStatus::kIterationLimit;
  }
  report.wall_time = elapsed();
  return result;
}

}  // namespace rodplan
