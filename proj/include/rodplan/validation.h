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


#ifndef RODPLAN_VALIDATION_H_
#define RODPLAN_VALIDATION_H_

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rodplan/bernstein.h"
#include "rodplan/geometry.h"
#include "rodplan/rod.h"

namespace rodplan {

// Brute-force checks on a dense (s, t) lattice. Everything here is built from
// surface evaluation and point-to-shape GJK only.

struct SamplingGrid {
  int n_s = 201;
  int n_t = 201;

  // Throws std::invalid_argument unless both counts are >= 2.
  void validate() const;
  // Evenly spaced, endpoints included exactly.
  std::vector<double> s_samples(const Interval& domain) const;
  std::vector<double> t_samples(const Interval& domain) const;
};

inline constexpr std::array<const char*, kFeasibilityFamilies> kFamilyNames = {
    "v_lower", "v_upper", "q", "u", "omega", "v_s", "q_t"};

struct FeasibilitySample {
  // Worst violation per family in squared units (0 when satisfied), indexed
  // by FeasibilityFamily.
  std::array<double, kFeasibilityFamilies> worst{};
  // Lattice point attaining each worst value.
  std::array<Eigen::Vector2d, kFeasibilityFamilies> where{};

  double max_violation() const;
};

FeasibilitySample sample_check_feasibility(const PoseSurfaces& pose,
                                           const FeasibilityBounds& bounds,
                                           const SamplingGrid& grid = {});

// Minimum point-to-obstacle distance over the lattice. Never below the true
// minimum.
double sample_min_dist(const BernsteinSurface& position, const ConvexShape& obstacle,
                       const SamplingGrid& grid = {});

struct VerificationSpec {
  FeasibilityBounds bounds;
  BoundarySpec boundary = straight_start(5, 1.0);
  std::vector<ConvexShape> obstacles;
  double d_safe = 0.0;
  Eigen::Vector3d p_des = Eigen::Vector3d::Zero();
  Eigen::Vector3d angles_des = Eigen::Vector3d::Zero();

  double feasibility_tol = 1e-6;
  // Sampled clearance must reach d_safe - clearance_slack.
  double clearance_slack = 1e-3;
  double boundary_tol = 1e-6;
  // Tip error is always reported; it only gates the verdict when set.
  std::optional<double> tip_tol;
};

struct BoundaryMismatch {
  double initial_position = 0.0;
  double initial_angles = 0.0;
  double rest_start = 0.0;
  double base_position = 0.0;
  double base_angles = 0.0;
  double terminal = 0.0;

  double max() const;
};

struct ClearanceCheck {
  double min_distance = 0.0;
  double required = 0.0;
  bool pass = false;
};

struct VerificationReport {
  SamplingGrid grid;
  FeasibilitySample feasibility;
  std::vector<ClearanceCheck> clearance;
  BoundaryMismatch boundary;
  double tip_error = 0.0;
  Eigen::Vector3d tip_angle_error = Eigen::Vector3d::Zero();
  // Names of the sections that failed, e.g. "feasibility.q", "boundary".
  std::vector<std::string> failures;

  bool pass() const { return failures.empty(); }
};

// Throws std::invalid_argument when the pose is malformed or its orders do
// not match the boundary spec.
VerificationReport verify_solution(const VerificationSpec& spec, const PoseSurfaces& pose,
                                   const SamplingGrid& grid = {});

// Central differences, step h * max(1, |x_k|).
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h = 1e-6);
Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h = 1e-6);

}  // namespace rodplan

#endif  // RODPLAN_VALIDATION_H_
