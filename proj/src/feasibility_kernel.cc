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


#include "feasibility_kernel.h"

#include "rodplan/bernstein.h"

namespace rodplan::internal {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMajorOut =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

namespace {

enum Family { kVLower, kVUpper, kQ, kU, kOmega, kVs, kQt };

// Gradient with respect to S (natural order) of sum W .* elevate(S).
MatrixXd elevation_adjoint(const MatrixXd& W, int rows, int cols) {
  const MatrixXd& er = elevation_matrix(rows - 1, static_cast<int>(W.rows()) - 1);
  const MatrixXd& ec = elevation_matrix(cols - 1, static_cast<int>(W.cols()) - 1);
  return er * W * ec.transpose();
}

}  // namespace

FeasibilityKernel::FeasibilityKernel(int m, int n, int m_e, int n_e, double L,
                                     const FeasibilityBounds& bounds)
    : m_(m), n_(n), re_(2 * m_e + 1), ce_(2 * n_e + 1), bounds_(bounds) {
  ds_ = differentiation_matrix(m, L).matrix();
  ds2_ = differentiation_matrix(m - 1, L).matrix();
  dt_ = differentiation_matrix(n, 1.0).matrix();
  dt2_ = differentiation_matrix(n - 1, 1.0).matrix();
}

MatrixXd FeasibilityKernel::elevate(const MatrixXd& s) const {
  return elevation_matrix(static_cast<int>(s.rows()) - 1, re_ - 1).transpose() * s *
         elevation_matrix(static_cast<int>(s.cols()) - 1, ce_ - 1);
}

VectorXd FeasibilityKernel::residuals(const Grids& p, const Grids& a, double T) const {
  MatrixXd v = MatrixXd::Zero(2 * m_ - 1, 2 * n_ + 1);
  MatrixXd q = MatrixXd::Zero(2 * m_ + 1, 2 * n_ - 1);
  MatrixXd vs = MatrixXd::Zero(2 * m_ - 3, 2 * n_ + 1);
  MatrixXd qt = MatrixXd::Zero(2 * m_ + 1, 2 * n_ - 3);
  MatrixXd u = MatrixXd::Zero(2 * m_ - 1, 2 * n_ + 1);
  MatrixXd om = MatrixXd::Zero(2 * m_ + 1, 2 * n_ - 1);
  for (int k = 0; k < 3; ++k) {
    const MatrixXd ps = ds_.transpose() * p[k];
    const MatrixXd pss = ds2_.transpose() * ps;
    const MatrixXd pt = p[k] * dt_;
    const MatrixXd ptt = pt * dt2_;
    v += product_coefficients(ps, ps);
    q += product_coefficients(pt, pt);
    vs += product_coefficients(pss, pss);
    qt += product_coefficients(ptt, ptt);
    const MatrixXd as = ds_.transpose() * a[k];
    const MatrixXd at = a[k] * dt_;
    u += product_coefficients(as, as);
    om += product_coefficients(at, at);
  }
  const double inv_t2 = 1.0 / (T * T);
  const MatrixXd ev = elevate(v);
  const MatrixXd fam[kFeasibilityFamilies] = {
      ev.array() - bounds_.v_min * bounds_.v_min,
      bounds_.v_max * bounds_.v_max - ev.array(),
      bounds_.q_max * bounds_.q_max - elevate(q).array() * inv_t2,
      bounds_.u_max * bounds_.u_max - elevate(u).array(),
      bounds_.omega_max * bounds_.omega_max - elevate(om).array() * inv_t2,
      bounds_.v_s_max * bounds_.v_s_max - elevate(vs).array(),
      bounds_.q_t_max * bounds_.q_t_max - elevate(qt).array() * inv_t2 * inv_t2};
  VectorXd out(size());
  const int block = re_ * ce_;
  for (int f = 0; f < kFeasibilityFamilies; ++f) {
    RowMajorOut(out.data() + f * block, re_, ce_) = fam[f];
  }
  return out;
}

FeasibilityKernel::Weights FeasibilityKernel::weights(double T, const VectorXd& w) const {
  const int block = re_ * ce_;
  auto W = [&](int f) { return MatrixXd(RowMajorMap(w.data() + f * block, re_, ce_)); };
  const double inv_t2 = 1.0 / (T * T);
  Weights h;
  h.h_v = elevation_adjoint(W(kVLower) - W(kVUpper), 2 * m_ - 1, 2 * n_ + 1);
  h.h_q = elevation_adjoint(-inv_t2 * W(kQ), 2 * m_ + 1, 2 * n_ - 1);
  h.h_a = elevation_adjoint(-W(kVs), 2 * m_ - 3, 2 * n_ + 1);
  h.h_at = elevation_adjoint(-inv_t2 * inv_t2 * W(kQt), 2 * m_ + 1, 2 * n_ - 3);
  h.h_u = elevation_adjoint(-W(kU), 2 * m_ - 1, 2 * n_ + 1);
  h.h_w = elevation_adjoint(-inv_t2 * W(kOmega), 2 * m_ + 1, 2 * n_ - 1);
  return h;
}

MatrixXd FeasibilityKernel::position_pullback(const Weights& h, const MatrixXd& P) const {
  const MatrixXd ps = ds_.transpose() * P;
  const MatrixXd pss = ds2_.transpose() * ps;
  const MatrixXd pt = P * dt_;
  const MatrixXd ptt = pt * dt2_;
  const MatrixXd d_ps = 2.0 * product_coefficients_adjoint(h.h_v, ps, m_, n_ + 1);
  const MatrixXd d_pt = 2.0 * product_coefficients_adjoint(h.h_q, pt, m_ + 1, n_);
  const MatrixXd d_pss = 2.0 * product_coefficients_adjoint(h.h_a, pss, m_ - 1, n_ + 1);
  const MatrixXd d_ptt = 2.0 * product_coefficients_adjoint(h.h_at, ptt, m_ + 1, n_ - 1);
  return ds_ * (d_ps + ds2_ * d_pss) + (d_pt + d_ptt * dt2_.transpose()) * dt_.transpose();
}

MatrixXd FeasibilityKernel::angle_pullback(const Weights& h, const MatrixXd& A) const {
  const MatrixXd as = ds_.transpose() * A;
  const MatrixXd at = A * dt_;
  const MatrixXd d_as = 2.0 * product_coefficients_adjoint(h.h_u, as, m_, n_ + 1);
  const MatrixXd d_at = 2.0 * product_coefficients_adjoint(h.h_w, at, m_ + 1, n_);
  return ds_ * d_as + d_at * dt_.transpose();
}

FeasibilityKernel::Gradient FeasibilityKernel::pullback(const Grids& p, const Grids& a, double T,
                                                        const VectorXd& w) const {
  const Weights h = weights(T, w);
  const int block = re_ * ce_;
  auto W = [&](int f) { return MatrixXd(RowMajorMap(w.data() + f * block, re_, ce_)); };
  const double inv_t2 = 1.0 / (T * T);
  Gradient g;
  MatrixXd q = MatrixXd::Zero(2 * m_ + 1, 2 * n_ - 1);
  MatrixXd qt = MatrixXd::Zero(2 * m_ + 1, 2 * n_ - 3);
  MatrixXd om = MatrixXd::Zero(2 * m_ + 1, 2 * n_ - 1);
  for (int k = 0; k < 3; ++k) {
    g.p[k] = position_pullback(h, p[k]);
    g.a[k] = angle_pullback(h, a[k]);
    const MatrixXd pt = p[k] * dt_;
    const MatrixXd ptt = pt * dt2_;
    const MatrixXd at = a[k] * dt_;
    q += product_coefficients(pt, pt);
    qt += product_coefficients(ptt, ptt);
    om += product_coefficients(at, at);
  }
  // d/dT of -X / T^2 is 2 X / T^3; of -X / T^4 is 4 X / T^5.
  g.T = (2.0 / T) * inv_t2 *
            (W(kQ).cwiseProduct(elevate(q)).sum() + W(kOmega).cwiseProduct(elevate(om)).sum()) +
        (4.0 / T) * inv_t2 * inv_t2 * W(kQt).cwiseProduct(elevate(qt)).sum();
  return g;
}

VectorXd FeasibilityKernel::position_column(const Grids& p, double T, int i, int j,
                                            int k) const {
  MatrixXd dP = MatrixXd::Zero(m_ + 1, n_ + 1);
  dP(i, j) = 1.0;
  const MatrixXd ps = ds_.transpose() * p[k];
  const MatrixXd pss = ds2_.transpose() * ps;
  const MatrixXd pt = p[k] * dt_;
  const MatrixXd ptt = pt * dt2_;
  const MatrixXd dps = ds_.transpose() * dP;
  const MatrixXd dpss = ds2_.transpose() * dps;
  const MatrixXd dpt = dP * dt_;
  const MatrixXd dptt = dpt * dt2_;
  const double inv_t2 = 1.0 / (T * T);
  const MatrixXd dv = 2.0 * elevate(product_coefficients(ps, dps));
  VectorXd out = VectorXd::Zero(size());
  const int block = re_ * ce_;
  RowMajorOut(out.data() + kVLower * block, re_, ce_) = dv;
  RowMajorOut(out.data() + kVUpper * block, re_, ce_) = -dv;
  RowMajorOut(out.data() + kQ * block, re_, ce_) =
      -2.0 * inv_t2 * elevate(product_coefficients(pt, dpt));
  RowMajorOut(out.data() + kVs * block, re_, ce_) =
      -2.0 * elevate(product_coefficients(pss, dpss));
  RowMajorOut(out.data() + kQt * block, re_, ce_) =
      -2.0 * inv_t2 * inv_t2 * elevate(product_coefficients(ptt, dptt));
  return out;
}

VectorXd FeasibilityKernel::angle_column(const Grids& a, double T, int i, int j, int c) const {
  MatrixXd dA = MatrixXd::Zero(m_ + 1, n_ + 1);
  dA(i, j) = 1.0;
  const MatrixXd as = ds_.transpose() * a[c];
  const MatrixXd at = a[c] * dt_;
  const double inv_t2 = 1.0 / (T * T);
  VectorXd out = VectorXd::Zero(size());
  const int block = re_ * ce_;
  RowMajorOut(out.data() + kU * block, re_, ce_) =
      -2.0 * elevate(product_coefficients(as, ds_.transpose() * dA));
  RowMajorOut(out.data() + kOmega * block, re_, ce_) =
      -2.0 * inv_t2 * elevate(product_coefficients(at, dA * dt_));
  return out;
}

VectorXd FeasibilityKernel::duration_column(const Grids& p, const Grids& a, double T) const {
  MatrixXd q = MatrixXd::Zero(2 * m_ + 1, 2 * n_ - 1);
  MatrixXd qt = MatrixXd::Zero(2 * m_ + 1, 2 * n_ - 3);
  MatrixXd om = MatrixXd::Zero(2 * m_ + 1, 2 * n_ - 1);
  for (int k = 0; k < 3; ++k) {
    const MatrixXd pt = p[k] * dt_;
    const MatrixXd ptt = pt * dt2_;
    const MatrixXd at = a[k] * dt_;
    q += product_coefficients(pt, pt);
    qt += product_coefficients(ptt, ptt);
    om += product_coefficients(at, at);
  }
  const double inv_t3 = 1.0 / (T * T * T);
  VectorXd out = VectorXd::Zero(size());
  const int block = re_ * ce_;
  RowMajorOut(out.data() + kQ * block, re_, ce_) = 2.0 * inv_t3 * elevate(q);
  RowMajorOut(out.data() + kOmega * block, re_, ce_) = 2.0 * inv_t3 * elevate(om);
  RowMajorOut(out.data() + kQt * block, re_, ce_) = 4.0 * inv_t3 / (T * T) * elevate(qt);
  return out;
}

MatrixXd FeasibilityKernel::position_hessian_block(double T, const VectorXd& w) const {
  const Weights h = weights(T, w);
  const int cells = (m_ + 1) * (n_ + 1);
  MatrixXd out(cells, cells);
  for (int i = 0; i <= m_; ++i)
    for (int j = 0; j <= n_; ++j) {
      MatrixXd e = MatrixXd::Zero(m_ + 1, n_ + 1);
      e(i, j) = 1.0;
      const RowMajorMatrix col = position_pullback(h, e);
      out.col(i * (n_ + 1) + j) = Eigen::Map<const VectorXd>(col.data(), cells);
    }
  return out;
}

MatrixXd FeasibilityKernel::angle_hessian_block(double T, const VectorXd& w) const {
  const Weights h = weights(T, w);
  const int cells = (m_ + 1) * (n_ + 1);
  MatrixXd out(cells, cells);
  for (int i = 0; i <= m_; ++i)
    for (int j = 0; j <= n_; ++j) {
      MatrixXd e = MatrixXd::Zero(m_ + 1, n_ + 1);
      e(i, j) = 1.0;
      const RowMajorMatrix col = angle_pullback(h, e);
      out.col(i * (n_ + 1) + j) = Eigen::Map<const VectorXd>(col.data(), cells);
    }
  return out;
}

}  // namespace rodplan::internal
