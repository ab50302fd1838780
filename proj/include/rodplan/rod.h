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

#ifndef RODPLAN_ROD_H_
#define RODPLAN_ROD_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rodplan/bernstein.h"

namespace rodplan {

// Reference pose of the rod: position p(s, t) in R^3 and XYZ Euler angles.
// All four surfaces share orders and domains [0, L] x [0, T].
struct PoseSurfaces {
  BernsteinSurface p;
  BernsteinSurface phi;
  BernsteinSurface theta;
  BernsteinSurface psi;

  // Throws std::invalid_argument when orders, domains or dimensions disagree.
  void validate() const;

  int m() const { return p.m(); }
  int n() const { return p.n(); }
  double length() const { return p.s_domain().length(); }
  double duration() const { return p.t_domain().length(); }

  // The angles stacked as one R^3-valued surface.
  BernsteinSurface angles() const;
};

struct FeasibilityBounds {
  double v_min = 0.0;
  double v_max = 0.0;
  double q_max = 0.0;
  double u_max = 0.0;
  double omega_max = 0.0;
  double v_s_max = 0.0;
  double q_t_max = 0.0;

  // Empty when consistent, otherwise the name of the first bad field.
  std::optional<std::string> first_invalid_field() const;
};

// The six squared-norm surfaces bounded by the feasibility constraints.
struct SquaredNorms {
  BernsteinSurface v_sq;   // |p_s|^2
  BernsteinSurface q_sq;   // |p_t|^2
  BernsteinSurface u_sq;   // |[phi_s, theta_s, psi_s]|^2
  BernsteinSurface w_sq;   // |[phi_t, theta_t, psi_t]|^2
  BernsteinSurface a_sq;   // |p_ss|^2
  BernsteinSurface at_sq;  // |p_tt|^2
};

struct ConstraintSurfaces {
  SquaredNorms base;      // orders (2m, 2n)
  SquaredNorms elevated;  // orders (2 m_e, 2 n_e)
  int m_e = 0;
  int n_e = 0;
};

// Requires m, n >= 2 and m_e >= m, n_e >= n.
ConstraintSurfaces constraint_surfaces(const PoseSurfaces& pose, int m_e, int n_e);

// Residual families in emission order; each family is row-major over the
// elevated control points.
enum class FeasibilityFamily { kVLower, kVUpper, kQ, kU, kOmega, kVs, kQt };
inline constexpr int kFeasibilityFamilies = 7;

// Residual >= 0 means the elevated control point satisfies its bound.
std::vector<double> feasibility_residuals(const ConstraintSurfaces& cs,
                                          const FeasibilityBounds& bounds);

struct TerminalPose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;
};

struct BoundarySpec {
  // t = 0 edge: position (dim 3) and angles (dim 3), both of order m on [0, L].
  BernsteinPolynomial initial_position;
  BernsteinPolynomial initial_angles;
  // Zero time derivative along the t = 0 edge.
  bool rest_start = true;
  // p(0, t) = 0 and phi = theta = psi = 0 at the base for all t.
  bool clamp_base = true;
  // Hard equality on the tip corner at t = T.
  std::optional<TerminalPose> terminal;
};

// Straight rod along +z with unit stretch and zero angles.
BoundarySpec straight_start(int m, double L);

// Scalar fields of the pose, in decision-vector order.
enum class PoseField { kX = 0, kY, kZ, kPhi, kTheta, kPsi };
inline constexpr int kPoseFields = 6;

double field_value(const PoseSurfaces& pose, PoseField field, int i, int j);

// A linear boundary equality on control points:
//   residual = cp(field, i, j) - (ref_j >= 0 ? cp(field, i, ref_j) : target).
struct BoundaryTerm {
  PoseField field = PoseField::kX;
  int i = 0;
  int j = 0;
  int ref_j = -1;
  double target = 0.0;
};

std::vector<BoundaryTerm> boundary_terms(int m, int n, const BoundarySpec& spec);
std::vector<double> boundary_residuals(const PoseSurfaces& pose,
                                       const BoundarySpec& spec);

// R = R_x(phi) R_y(theta) R_z(psi).
Eigen::Matrix3d euler_to_rotation(double phi, double theta, double psi);

struct TipPose {
  Eigen::Vector3d position;
  Eigen::Vector3d angles;  // phi, theta, psi
};

TipPose tip_pose(const PoseSurfaces& pose, double t);

}  // namespace rodplan

#endif  // RODPLAN_ROD_H_
