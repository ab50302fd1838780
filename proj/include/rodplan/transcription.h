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

#ifndef RODPLAN_TRANSCRIPTION_H_
#define RODPLAN_TRANSCRIPTION_H_

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rodplan/bernstein.h"
#include "rodplan/geometry.h"
#include "rodplan/nlp.h"
#include "rodplan/rod.h"

namespace rodplan {
namespace internal {
class FeasibilityKernel;
}  // namespace internal

// Index map of the decision vector:
//   [ p (x,y,z interleaved, row-major over (i, j)) | phi | theta | psi | T ].
class DecisionLayout {
 public:
  DecisionLayout(int m, int n);

  int m() const { return m_; }
  int n() const { return n_; }
  int grid_size() const { return (m_ + 1) * (n_ + 1); }
  int size() const { return 6 * grid_size() + 1; }

  int position_index(int i, int j, int k) const { return 3 * (i * (n_ + 1) + j) + k; }
  int angle_index(int a, int i, int j) const {
    return (3 + a) * grid_size() + i * (n_ + 1) + j;
  }
  int field_index(PoseField field, int i, int j) const;
  int duration_index() const { return 6 * grid_size(); }

  Eigen::VectorXd pack(const PoseSurfaces& pose) const;
  // The returned surfaces live on [0, L] x [0, x[T]].
  PoseSurfaces unpack(const Eigen::VectorXd& x, double L) const;

 private:
  int m_;
  int n_;
};

using RunningCost =
    std::function<double(const Eigen::Vector3d& p, double phi, double theta, double psi)>;

struct CostSpec {
  double w1 = 0.0;
  double w2 = 0.0;
  double w3 = 0.0;
  double w4 = 0.0;
  Eigen::Vector3d p_des = Eigen::Vector3d::Zero();
  double phi_des = 0.0;
  double theta_des = 0.0;
  double psi_des = 0.0;
  // Optional linear time penalty wT * T.
  double w_time = 0.0;
  // When set, replaces tip tracking with the double control-point quadrature.
  RunningCost running;
};

// Tip tracking: sum_j T/(n+1) * l(tip control point j) + wT * T.
// Generic: sum_ij L/(m+1) * T/(n+1) * running(cp_ij) + wT * T.
double cost(const Eigen::VectorXd& x, const DecisionLayout& layout, double L,
            const CostSpec& spec);
Eigen::VectorXd cost_gradient(const Eigen::VectorXd& x, const DecisionLayout& layout,
                              double L, const CostSpec& spec);

struct TranscriptionConfig {
  double L = 1.0;
  int m = 5;
  int n = 5;
  int m_e = 10;
  int n_e = 10;
  FeasibilityBounds bounds;
  BoundarySpec boundary = straight_start(5, 1.0);
  CostSpec cost;
  std::vector<ConvexShape> obstacles;
  double d_safe = 0.02;
  double epsilon = 1e-4;
  int max_depth = 40;
  double T_min = 0.1;
  double T_max = 60.0;
  // Turn boundary equalities that pin single control points into fixed
  // variable bounds. The equalities stay in the problem either way.
  bool fix_pinned_variables = true;
};

// The rod planning problem as an NlpProblem. Inequalities are the feasibility residuals
// (family-major, row-major within a family) followed by one clearance
// residual per obstacle.
class RodPlanningProblem : public NlpProblem {
 public:
  explicit RodPlanningProblem(TranscriptionConfig config);
  ~RodPlanningProblem() override;

  const TranscriptionConfig& config() const { return config_; }
  const DecisionLayout& layout() const { return layout_; }
  int num_feasibility() const { return num_feasibility_; }

  int dimension() const override { return layout_.size(); }
  int num_equalities() const override { return static_cast<int>(terms_.size()); }
  int num_inequalities() const override {
    return num_feasibility_ + static_cast<int>(config_.obstacles.size());
  }
  VariableBounds bounds() const override { return bounds_; }

  double cost(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd cost_gradient(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd equalities(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd inequalities(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd equality_jacobian_transpose(const Eigen::VectorXd& x,
                                              const Eigen::VectorXd& w) const override;
  Eigen::VectorXd inequality_jacobian_transpose(const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& w) const override;
  Eigen::VectorXd inequality_scales() const override;

  Eigen::VectorXd feasibility(const Eigen::VectorXd& x) const;
  Eigen::VectorXd clearance(const Eigen::VectorXd& x) const;
  // Clearance residuals use the MinDist witness refined by local descent, so
  // they are smooth wherever the closest point is unique.
  Eigen::MatrixXd clearance_jacobian(const Eigen::VectorXd& x) const;
  std::vector<SurfaceWitness> witnesses(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd equality_jacobian(const Eigen::VectorXd& x) const override;
  // Feasibility columns are analytic; clearance rows come from
  // clearance_jacobian. Fixed variables get zero columns.
  Eigen::MatrixXd inequality_jacobian(const Eigen::VectorXd& x) const override;
  // Clearance curvature is left out; fixed variables get zero rows/columns.
  Eigen::MatrixXd lagrangian_hessian(const Eigen::VectorXd& x, double sigma,
                                     const Eigen::VectorXd& w_e,
                                     const Eigen::VectorXd& w_i) const override;

  // True when the pinned variables contradict each other.
  bool has_conflicting_pins() const { return conflicting_pins_; }

 private:
  Eigen::VectorXd feasibility_jacobian_transpose(const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& w) const;

  TranscriptionConfig config_;
  DecisionLayout layout_;
  std::unique_ptr<internal::FeasibilityKernel> kernel_;
  std::vector<BoundaryTerm> terms_;
  VariableBounds bounds_;
  int num_feasibility_ = 0;
  bool conflicting_pins_ = false;
  std::vector<int> free_;

  mutable std::mutex cache_mu_;
  mutable Eigen::VectorXd witness_x_;
  mutable std::vector<SurfaceWitness> witness_value_;
};

// Deterministic starting point: the t = 0 edge holds the initial pose, later
// time columns blend toward a straight rod aimed at the target, and T starts
// at (tip distance) / q_max clamped to [T_min, T_max]. With obstacles, the
// blend is shortened until the guess clears every obstacle by d_safe.
Eigen::VectorXd initial_guess(const TranscriptionConfig& config);

// Recomputes the violation figures of a report from the unpacked surfaces,
// using only the rod and geometry modules: boundary residuals, elevated
// feasibility residuals and MinDist clearance at the configured epsilon.
SolverReport certify(const TranscriptionConfig& config, const Eigen::VectorXd& x,
                     SolverReport report);

}  // namespace rodplan

#endif  // RODPLAN_TRANSCRIPTION_H_
