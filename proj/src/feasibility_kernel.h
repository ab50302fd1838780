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


#ifndef RODPLAN_SRC_FEASIBILITY_KERNEL_H_
#define RODPLAN_SRC_FEASIBILITY_KERNEL_H_

#include <array>

#include <Eigen/Dense>

#include "rodplan/rod.h"

namespace rodplan::internal {

// Feasibility residuals of a packed pose worked directly on control-point
// grids, with their first and second derivatives. Position grids are indexed
// [k](i, j); angle grids likewise. Time derivatives are taken on the unit
// interval and rescaled by powers of T.
class FeasibilityKernel {
 public:
  using Grids = std::array<Eigen::MatrixXd, 3>;

  FeasibilityKernel(int m, int n, int m_e, int n_e, double L, const FeasibilityBounds& bounds);

  int rows() const { return re_; }
  int cols() const { return ce_; }
  int size() const { return kFeasibilityFamilies * re_ * ce_; }

  // Family-major, row-major within a family.
  Eigen::VectorXd residuals(const Grids& p, const Grids& a, double T) const;

  struct Gradient {
    Grids p, a;
    double T = 0.0;
  };
  Gradient pullback(const Grids& p, const Grids& a, double T, const Eigen::VectorXd& w) const;

  // Columns of the Jacobian for one position or angle control point.
  Eigen::VectorXd position_column(const Grids& p, double T, int i, int j, int k) const;
  Eigen::VectorXd angle_column(const Grids& a, double T, int i, int j, int c) const;
  Eigen::VectorXd duration_column(const Grids& p, const Grids& a, double T) const;

  // The weighted residual sum is quadratic in each position (angle) grid with
  // the same block for every component; these return that (m+1)(n+1) block
  // in row-major (i, j) order. Mixed terms with T are not included.
  Eigen::MatrixXd position_hessian_block(double T, const Eigen::VectorXd& w) const;
  Eigen::MatrixXd angle_hessian_block(double T, const Eigen::VectorXd& w) const;

 private:
  struct Weights {
    Eigen::MatrixXd h_v, h_q, h_a, h_at, h_u, h_w;
  };
  Weights weights(double T, const Eigen::VectorXd& w) const;
  Eigen::MatrixXd elevate(const Eigen::MatrixXd& s) const;
  Eigen::MatrixXd position_pullback(const Weights& h, const Eigen::MatrixXd& P) const;
  Eigen::MatrixXd angle_pullback(const Weights& h, const Eigen::MatrixXd& A) const;

  int m_, n_, re_, ce_;
  FeasibilityBounds bounds_;
  Eigen::MatrixXd ds_, ds2_, dt_, dt2_;
};

}  // namespace rodplan::internal

#endif  // RODPLAN_SRC_FEASIBILITY_KERNEL_H_
