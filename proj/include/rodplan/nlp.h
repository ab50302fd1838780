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

#ifndef RODPLAN_NLP_H_
#define RODPLAN_NLP_H_

#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace rodplan {

struct VariableBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

// A smooth-ish nonlinear program
//
//   min f(x)  s.t.  c_E(x) = 0,  c_I(x) >= 0,  lower <= x <= upper.
//
// Jacobians are only needed as transposed products J^T w.
class NlpProblem {
 public:
  virtual ~NlpProblem() = default;

  virtual int dimension() const = 0;
  virtual int num_equalities() const = 0;
  virtual int num_inequalities() const = 0;
  virtual VariableBounds bounds() const = 0;

  virtual double cost(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd cost_gradient(const Eigen::VectorXd& x) const = 0;

  virtual Eigen::VectorXd equalities(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd inequalities(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd equality_jacobian_transpose(
      const Eigen::VectorXd& x, const Eigen::VectorXd& w) const = 0;
  virtual Eigen::VectorXd inequality_jacobian_transpose(
      const Eigen::VectorXd& x, const Eigen::VectorXd& w) const = 0;

  // Dense Jacobians. The defaults assemble them row by row from the
  // transposed products.
  virtual Eigen::MatrixXd equality_jacobian(const Eigen::VectorXd& x) const;
  virtual Eigen::MatrixXd inequality_jacobian(const Eigen::VectorXd& x) const;

  // Hessian of  sigma f + w_E . c_E + w_I . c_I.  The default differences
  // the gradient centrally.
  virtual Eigen::MatrixXd lagrangian_hessian(const Eigen::VectorXd& x, double sigma,
                                             const Eigen::VectorXd& w_e,
                                             const Eigen::VectorXd& w_i) const;

  // Positive per-row scales; the solver balances c_I / scale internally but
  // judges feasibility on the unscaled residuals.
  virtual Eigen::VectorXd inequality_scales() const {
    return Eigen::VectorXd::Ones(num_inequalities());
  }
};

enum class SolverStatus { kOptimal, kFeasibleStalled, kInfeasible, kIterationLimit };

std::string to_string(SolverStatus status);
bool is_feasible(SolverStatus status);

struct SolverOptions {
  double tol_eq = 1e-6;
  double tol_ineq = 1e-6;
  // Projected gradient of the scaled Lagrangian.
  double tol_opt = 1e-5;
  int max_iter = 500;       // outer iterations
  int max_inner_iter = 200;  // Newton steps per outer iteration
  std::uint64_t seed = 0;
  bool verbose = false;
};

struct SolverReport {
  SolverStatus status = SolverStatus::kIterationLimit;
  double cost = 0.0;
  double max_equality_violation = 0.0;
  // +inf when the problem has no inequalities.
  double min_inequality_residual = 0.0;
  int iterations = 0;
  int inner_iterations = 0;
  double wall_time = 0.0;  // seconds
};

struct SolveResult {
  Eigen::VectorXd x;
  SolverReport report;
};

// PHR augmented Lagrangian. Each subproblem is minimized over the box by a
// projected trust-region Newton method.
class AugmentedLagrangianSolver {
 public:
  explicit AugmentedLagrangianSolver(SolverOptions options = {});

  SolveResult solve(const NlpProblem& problem, const Eigen::VectorXd& x0) const;

  const SolverOptions& options() const { return options_; }

 private:
  SolverOptions options_;
};

}  // namespace rodplan

#endif  // RODPLAN_NLP_H_
