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


#ifndef RODPLAN_TESTS_ORACLES_H_
#define RODPLAN_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "rodplan/bernstein.h"

// Reference computations that avoid the library's GJK and branch-and-bound.

namespace rodplan::oracle {

inline double point_sphere(const Eigen::Vector3d& p, const Eigen::Vector3d& c, double r) {
  return std::max(0.0, (p - c).norm() - r);
}

inline double point_box(const Eigen::Vector3d& p, const Eigen::Vector3d& c, double edge) {
  const Eigen::Vector3d h = Eigen::Vector3d::Constant(edge / 2);
  const Eigen::Vector3d d = ((p - c).cwiseAbs() - h).cwiseMax(0.0);
  return d.norm();
}

// Euclidean projection onto the probability simplex (sort-based).
inline Eigen::VectorXd project_simplex(const Eigen::VectorXd& y) {
  std::vector<double> u(y.data(), y.data() + y.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumsum += u[k];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (y.array() - theta).cwiseMax(0.0);
}

// Distance between conv(A) and conv(B) (columns are points) by accelerated
// projected gradient on the barycentric weights.
inline double hull_distance(const Eigen::Matrix3Xd& A, const Eigen::Matrix3Xd& B,
                            int iterations = 20000) {
  const int na = static_cast<int>(A.cols());
  const int nb = static_cast<int>(B.cols());
  Eigen::MatrixXd M(3, na + nb);
  M << A, -B;
  const double lip = 2.0 * M.squaredNorm();
  Eigen::VectorXd x(na + nb);
  x.head(na).setConstant(1.0 / na);
  x.tail(nb).setConstant(1.0 / nb);
  Eigen::VectorXd y = x, prev = x;
  double tk = 1.0;
  auto project = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd out(z.size());
    out.head(na) = project_simplex(z.head(na));
    out.tail(nb) = project_simplex(z.tail(nb));
    return out;
  };
  double best = (M * x).norm();
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd g = 2.0 * M.transpose() * (M * y);
    x = project(y - g / lip);
    best = std::min(best, (M * x).norm());
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    y = x + ((tk - 1.0) / tn) * (x - prev);
    prev = x;
    tk = tn;
  }
  return best;
}

// Minimum of `dist(p(s, t))` over an ns x nt lattice of the surface domain.
template <typename Dist>
double sampled_min(const BernsteinSurface& p, const Dist& dist, int ns, int nt,
                   const Interval* sd = nullptr, const Interval* td = nullptr) {
  const Interval S = sd ? *sd : p.s_domain();
  const Interval T = td ? *td : p.t_domain();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ns; ++i) {
    const double s = S.lo + S.length() * i / (ns - 1);
    for (int j = 0; j < nt; ++j) {
      const double t = T.lo + T.length() * j / (nt - 1);
      best = std::min(best, dist(Eigen::Vector3d(p.evaluate(s, t))));
    }
  }
  return best;
}

// Bound on how far the lattice minimum can sit above the true minimum:
// max |p_s| * ds / 2 + max |p_t| * dt / 2, with the speeds bounded by the
// derivative control points.
inline double lattice_resolution(const BernsteinSurface& p, int ns, int nt) {
  double vs = 0.0, vt = 0.0;
  const double ls = p.s_domain().length(), lt = p.t_domain().length();
  for (int i = 0; i < p.m(); ++i)
    for (int j = 0; j <= p.n(); ++j)
      vs = std::max(vs, (p.control_point(i + 1, j) - p.control_point(i, j)).norm() * p.m() / ls);
  for (int i = 0; i <= p.m(); ++i)
    for (int j = 0; j < p.n(); ++j)
      vt = std::max(vt, (p.control_point(i, j + 1) - p.control_point(i, j)).norm() * p.n() / lt);
  return 0.5 * (vs * ls / (ns - 1) + vt * lt / (nt - 1));
}

}  // namespace rodplan::oracle

#endif  // RODPLAN_TESTS_ORACLES_H_
