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

#include "rodplan/rod.h"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace rodplan {
namespace {

BernsteinSurface to_orders(const BernsteinSurface& g, int m, int n) {
  return elevate(g, m, n);
}

SquaredNorms elevated_norms(const SquaredNorms& s, int m, int n) {
  return SquaredNorms{to_orders(s.v_sq, m, n), to_orders(s.q_sq, m, n),
                      to_orders(s.u_sq, m, n), to_orders(s.w_sq, m, n),
                      to_orders(s.a_sq, m, n), to_orders(s.at_sq, m, n)};
}

}  // namespace

void PoseSurfaces::validate() const {
  if (p.dim() != 3) throw std::invalid_argument("position surface must be R^3-valued");
  for (const BernsteinSurface* a : {&phi, &theta, &psi}) {
    if (a->dim() != 1) throw std::invalid_argument("angle surfaces must be scalar");
    if (a->m() != p.m() || a->n() != p.n()) {
      throw std::invalid_argument("pose surfaces have different orders");
    }
    if (!(a->s_domain() == p.s_domain()) || !(a->t_domain() == p.t_domain())) {
      throw std::invalid_argument("pose surfaces have different domains");
    }
  }
}

BernsteinSurface PoseSurfaces::angles() const {
  return BernsteinSurface({phi.component(0), theta.component(0), psi.component(0)},
                          p.s_domain(), p.t_domain());
}

std::optional<std::string> FeasibilityBounds::first_invalid_field() const {
  const std::pair<const char*, double> positive[] = {
      {"vmax", v_max}, {"qmax", q_max},   {"umax", u_max},
      {"wmax", omega_max}, {"vsmax", v_s_max}, {"qtmax", q_t_max}};
  if (!std::isfinite(v_min) || v_min < 0.0) return "vmin";
  for (const auto& [name, value] : positive) {
    if (!std::isfinite(value) || !(value > 0.0)) return name;
  }
  if (!(v_min < v_max)) return "vmin";
  return std::nullopt;
}

ConstraintSurfaces constraint_surfaces(const PoseSurfaces& pose, int m_e, int n_e) {
  pose.validate();
  const int m = pose.m();
  const int n = pose.n();
  if (m < 2 || n < 2) {
    throw std::invalid_argument("constraint surfaces need orders m, n >= 2");
  }
  if (m_e < m || n_e < n) {
    throw std::invalid_argument("elevated orders must not be below (m, n)");
  }
  const BernsteinSurface ang = pose.angles();
  const BernsteinSurface p_s = partial_s(pose.p);
  const BernsteinSurface p_t = partial_t(pose.p);
  const BernsteinSurface p_ss = partial_s(p_s);
  const BernsteinSurface p_tt = partial_t(p_t);
  const BernsteinSurface ang_s = partial_s(ang);
  const BernsteinSurface ang_t = partial_t(ang);

  // Natural product orders are below (2m, 2n); elevation is exact.
  SquaredNorms base{to_orders(dot(p_s, p_s), 2 * m, 2 * n),
                    to_orders(dot(p_t, p_t), 2 * m, 2 * n),
                    to_orders(dot(ang_s, ang_s), 2 * m, 2 * n),
                    to_orders(dot(ang_t, ang_t), 2 * m, 2 * n),
                    to_orders(dot(p_ss, p_ss), 2 * m, 2 * n),
                    to_orders(dot(p_tt, p_tt), 2 * m, 2 * n)};
  SquaredNorms elevated = elevated_norms(base, 2 * m_e, 2 * n_e);
  return ConstraintSurfaces{std::move(base), std::move(elevated), m_e, n_e};
}

std::vector<double> feasibility_residuals(const ConstraintSurfaces& cs,
                                          const FeasibilityBounds& b) {
  const SquaredNorms& e = cs.elevated;
  const auto rows = e.v_sq.m() + 1;
  const auto cols = e.v_sq.n() + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(kFeasibilityFamilies) * rows * cols);
  auto emit = [&](const BernsteinSurface& s, double sign, double offset) {
    const Eigen::MatrixXd& c = s.component(0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) out.push_back(sign * c(i, j) + offset);
  };
  emit(e.v_sq, 1.0, -b.v_min * b.v_min);
  emit(e.v_sq, -1.0, b.v_max * b.v_max);
  emit(e.q_sq, -1.0, b.q_max * b.q_max);
  emit(e.u_sq, -1.0, b.u_max * b.u_max);
  emit(e.w_sq, -1.0, b.omega_max * b.omega_max);
  emit(e.a_sq, -1.0, b.v_s_max * b.v_s_max);
  emit(e.at_sq, -1.0, b.q_t_max * b.q_t_max);
  return out;
}

BoundarySpec straight_start(int m, double L) {
  if (m < 1) throw std::invalid_argument("straight_start needs m >= 1");
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m + 1, 3);
  for (int i = 0; i <= m; ++i) p(i, 2) = L * i / m;
  return BoundarySpec{BernsteinPolynomial(p, Interval{0.0, L}),
                      BernsteinPolynomial(Eigen::MatrixXd::Zero(m + 1, 3),
                                          Interval{0.0, L}),
                      true, true, std::nullopt};
}

double field_value(const PoseSurfaces& pose, PoseField field, int i, int j) {
  switch (field) {
    case PoseField::kX: return pose.p.component(0)(i, j);
    case PoseField::kY: return pose.p.component(1)(i, j);
    case PoseField::kZ: return pose.p.component(2)(i, j);
    case PoseField::kPhi: return pose.phi.component(0)(i, j);
    case PoseField::kTheta: return pose.theta.component(0)(i, j);
    case PoseField::kPsi: return pose.psi.component(0)(i, j);
  }
  return 0.0;
}

std::vector<BoundaryTerm> boundary_terms(int m, int n, const BoundarySpec& spec) {
  if (spec.initial_position.order() != m || spec.initial_angles.order() != m ||
      spec.initial_position.dim() != 3 || spec.initial_angles.dim() != 3) {
    throw std::invalid_argument("initial edge polynomials must have order m and dim 3");
  }
  std::vector<BoundaryTerm> terms;
  auto initial_target = [&](int f, int i) {
    return f < 3 ? spec.initial_position.control_points()(i, f)
                 : spec.initial_angles.control_points()(i, f - 3);
  };
  for (int i = 0; i <= m; ++i)
    for (int f = 0; f < kPoseFields; ++f)
      terms.push_back({static_cast<PoseField>(f), i, 0, -1, initial_target(f, i)});
  if (spec.rest_start && n >= 1) {
    for (int i = 0; i <= m; ++i)
      for (int f = 0; f < kPoseFields; ++f)
        terms.push_back({static_cast<PoseField>(f), i, 1, 0, 0.0});
  }
  if (spec.clamp_base) {
    for (int j = 0; j <= n; ++j)
      for (int f = 0; f < kPoseFields; ++f)
        terms.push_back({static_cast<PoseField>(f), 0, j, -1, 0.0});
  }
  if (spec.terminal) {
    const TerminalPose& tp = *spec.terminal;
    const double targets[kPoseFields] = {tp.position.x(), tp.position.y(),
                                         tp.position.z(), tp.phi,
                                         tp.theta,        tp.psi};
    for (int f = 0; f < kPoseFields; ++f)
      terms.push_back({static_cast<PoseField>(f), m, n, -1, targets[f]});
  }
  return terms;
}

std::vector<double> boundary_residuals(const PoseSurfaces& pose,
                                       const BoundarySpec& spec) {
  pose.validate();
  const auto terms = boundary_terms(pose.m(), pose.n(), spec);
  std::vector<double> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    const double v = field_value(pose, t.field, t.i, t.j);
    const double ref = t.ref_j >= 0 ? field_value(pose, t.field, t.i, t.ref_j) : t.target;
    out.push_back(v - ref);
  }
  return out;
}

Eigen::Matrix3d euler_to_rotation(double phi, double theta, double psi) {
  const Eigen::Matrix3d rx = Eigen::AngleAxisd(phi, Eigen::Vector3d::UnitX()).toRotationMatrix();
  const Eigen::Matrix3d ry = Eigen::AngleAxisd(theta, Eigen::Vector3d::UnitY()).toRotationMatrix();
  const Eigen::Matrix3d rz = Eigen::AngleAxisd(psi, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  return rx * ry * rz;
}

TipPose tip_pose(const PoseSurfaces& pose, double t) {
  const double L = pose.p.s_domain().hi;
  const Eigen::VectorXd p = pose.p.evaluate(L, t);
  return TipPose{Eigen::Vector3d(p(0), p(1), p(2)),
                 Eigen::Vector3d(pose.phi.value(L, t), pose.theta.value(L, t),
                                 pose.psi.value(L, t))};
}

}  // namespace rodplan
