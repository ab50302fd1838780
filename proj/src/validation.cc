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


#include "rodplan/validation.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rodplan {
namespace {

using Eigen::Vector3d;

// Zero surface standing in for the derivative of an order-0 direction.
BernsteinSurface zero_like(const BernsteinSurface& g) {
  return BernsteinSurface::constant(0, 0, g.dim(), 0.0, g.s_domain(), g.t_domain());
}

BernsteinSurface d_s(const BernsteinSurface& g) {
  return g.m() >= 1 ? partial_s(g) : zero_like(g);
}

BernsteinSurface d_t(const BernsteinSurface& g) {
  return g.n() >= 1 ? partial_t(g) : zero_like(g);
}

Vector3d at(const BernsteinSurface& g, double s, double t) {
  return Vector3d(g.evaluate(s, t));
}

std::vector<double> lattice(int count, const Interval& domain) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    out[i] = domain.lo + domain.length() * static_cast<double>(i) / (count - 1);
  }
  out.back() = domain.hi;
  return out;
}

}  // namespace

void SamplingGrid::validate() const {
  if (n_s < 2 || n_t < 2) throw std::invalid_argument("sampling grid needs >= 2 points per axis");
}

std::vector<double> SamplingGrid::s_samples(const Interval& domain) const {
  validate();
  return lattice(n_s, domain);
}

std::vector<double> SamplingGrid::t_samples(const Interval& domain) const {
  validate();
  return lattice(n_t, domain);
}

double FeasibilitySample::max_violation() const {
  return *std::max_element(worst.begin(), worst.end());
}

FeasibilitySample sample_check_feasibility(const PoseSurfaces& pose,
                                           const FeasibilityBounds& bounds,
                                           const SamplingGrid& grid) {
  pose.validate();
  const BernsteinSurface angles = pose.angles();
  const BernsteinSurface ps = d_s(pose.p);
  const BernsteinSurface pt = d_t(pose.p);
  const BernsteinSurface pss = d_s(ps);
  const BernsteinSurface ptt = d_t(pt);
  const BernsteinSurface as = d_s(angles);
  const BernsteinSurface at_ = d_t(angles);

  FeasibilitySample out;
  for (auto& w : out.where) w.setZero();
  auto record = [&](FeasibilityFamily f, double violation, double s, double t) {
    const int k = static_cast<int>(f);
    if (violation > out.worst[k]) {
      out.worst[k] = violation;
      out.where[k] = Eigen::Vector2d(s, t);
    }
  };
  const auto ss = grid.s_samples(pose.p.s_domain());
  const auto ts = grid.t_samples(pose.p.t_domain());
  for (double s : ss) {
    for (double t : ts) {
      const double v = at(ps, s, t).squaredNorm();
      record(FeasibilityFamily::kVLower, bounds.v_min * bounds.v_min - v, s, t);
      record(FeasibilityFamily::kVUpper, v - bounds.v_max * bounds.v_max, s, t);
      record(FeasibilityFamily::kQ, at(pt, s, t).squaredNorm() - bounds.q_max * bounds.q_max,
             s, t);
      record(FeasibilityFamily::kU, at(as, s, t).squaredNorm() - bounds.u_max * bounds.u_max,
             s, t);
      record(FeasibilityFamily::kOmega,
             at(at_, s, t).squaredNorm() - bounds.omega_max * bounds.omega_max, s, t);
      record(FeasibilityFamily::kVs,
             at(pss, s, t).squaredNorm() - bounds.v_s_max * bounds.v_s_max, s, t);
      record(FeasibilityFamily::kQt,
             at(ptt, s, t).squaredNorm() - bounds.q_t_max * bounds.q_t_max, s, t);
    }
  }
  return out;
}

double sample_min_dist(const BernsteinSurface& position, const ConvexShape& obstacle,
                       const SamplingGrid& grid) {
  if (position.dim() != 3) throw std::invalid_argument("sample_min_dist needs an R^3 surface");
  double best = std::numeric_limits<double>::infinity();
  for (double s : grid.s_samples(position.s_domain())) {
    for (double t : grid.t_samples(position.t_domain())) {
      best = std::min(best, gjk_distance(ConvexShape::point(at(position, s, t)), obstacle));
    }
  }
  return best;
}

double BoundaryMismatch::max() const {
  return std::max({initial_position, initial_angles, rest_start, base_position, base_angles,
                   terminal});
}

VerificationReport verify_solution(const VerificationSpec& spec, const PoseSurfaces& pose,
                                   const SamplingGrid& grid) {
  pose.validate();
  grid.validate();
  const BoundarySpec& b = spec.boundary;
  if (b.initial_position.order() != pose.m() || b.initial_angles.order() != pose.m()) {
    throw std::invalid_argument("solution order m does not match the initial configuration");
  }
  VerificationReport report;
  report.grid = grid;

  report.feasibility = sample_check_feasibility(pose, spec.bounds, grid);
  for (int k = 0; k < kFeasibilityFamilies; ++k) {
    if (report.feasibility.worst[k] > spec.feasibility_tol) {
      report.failures.push_back(std::string("feasibility.") + kFamilyNames[k]);
    }
  }

  for (std::size_t o = 0; o < spec.obstacles.size(); ++o) {
    ClearanceCheck c;
    c.min_distance = sample_min_dist(pose.p, spec.obstacles[o], grid);
    c.required = spec.d_safe - spec.clearance_slack;
    c.pass = c.min_distance >= c.required;
    if (!c.pass) report.failures.push_back("clearance." + std::to_string(o));
    report.clearance.push_back(c);
  }

  const BernsteinSurface angles = pose.angles();
  const Interval sd = pose.p.s_domain();
  const Interval td = pose.p.t_domain();
  const auto ss = grid.s_samples(sd);
  const auto ts = grid.t_samples(td);
  BoundaryMismatch& bm = report.boundary;
  // Reference edge polynomials may live on [0, L] with a different L only by
  // rounding, so clamp into their domain.
  auto ref = [](const BernsteinPolynomial& poly, double s) {
    const double x = std::clamp(s, poly.domain().lo, poly.domain().hi);
    return Vector3d(poly.evaluate(x));
  };
  for (double s : ss) {
    bm.initial_position =
        std::max(bm.initial_position, (at(pose.p, s, td.lo) - ref(b.initial_position, s)).norm());
    bm.initial_angles =
        std::max(bm.initial_angles, (at(angles, s, td.lo) - ref(b.initial_angles, s)).norm());
  }
  if (b.rest_start) {
    const BernsteinSurface pt = d_t(pose.p);
    const BernsteinSurface at_ = d_t(angles);
    for (double s : ss) {
      bm.rest_start = std::max({bm.rest_start, at(pt, s, td.lo).norm(), at(at_, s, td.lo).norm()});
    }
  }
  if (b.clamp_base) {
    for (double t : ts) {
      bm.base_position = std::max(bm.base_position, at(pose.p, sd.lo, t).norm());
      bm.base_angles = std::max(bm.base_angles, at(angles, sd.lo, t).norm());
    }
  }
  const Vector3d tip = at(pose.p, sd.hi, td.hi);
  const Vector3d tip_angles = at(angles, sd.hi, td.hi);
  if (b.terminal) {
    const Vector3d target_angles(b.terminal->phi, b.terminal->theta, b.terminal->psi);
    bm.terminal = std::max((tip - b.terminal->position).norm(),
                           (tip_angles - target_angles).cwiseAbs().maxCoeff());
  }
  if (bm.max() > spec.boundary_tol) report.failures.push_back("boundary");

  report.tip_error = (tip - spec.p_des).norm();
  report.tip_angle_error = tip_angles - spec.angles_des;
  if (spec.tip_tol && !(report.tip_error <= *spec.tip_tol)) report.failures.push_back("tip");
  return report;
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double step = h * std::max(1.0, std::abs(x(k)));
    xp(k) = x(k) + step;
    const double fp = f(xp);
    xp(k) = x(k) - step;
    const double fm = f(xp);
    xp(k) = x(k);
    g(k) = (fp - fm) / (2.0 * step);
  }
  return g;
}

Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h) {
  Eigen::MatrixXd jac;
  Eigen::VectorXd xp = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double step = h * std::max(1.0, std::abs(x(k)));
    xp(k) = x(k) + step;
    const Eigen::VectorXd fp = f(xp);
    xp(k) = x(k) - step;
    const Eigen::VectorXd fm = f(xp);
    xp(k) = x(k);
    if (k == 0) jac.resize(fp.size(), x.size());
    jac.col(k) = (fp - fm) / (2.0 * step);
  }
  return jac;
}

}  // namespace rodplan
