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

#ifndef RODPLAN_BERNSTEIN_H_
#define RODPLAN_BERNSTEIN_H_

// Bernstein polynomials and tensor-product Bernstein surfaces.
//
// A surface of orders (m, n) over [s0, s1] x [t0, t1] is
//
//   x(s, t) = sum_i sum_j c_ij B_i^m(u(s)) B_j^n(w(t)),
//
// with u, w the affine maps onto [0, 1]. Control points are stored per output
// component as an (m+1) x (n+1) matrix: row index i runs along s, column index
// j along t. Left multiplication acts on s, right multiplication on t.

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace rodplan {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const;
  bool operator==(const Interval& other) const = default;
};

// Binomial coefficient as a double; exact for the orders used here.
double binomial(int n, int k);

// B_i^n(u) on [0, 1], computed directly from the definition.
double bernstein_basis(int n, int i, double u);

// Runs the de Casteljau recurrence over `coeffs` at u in [0, 1].
double de_casteljau(std::span<const double> coeffs, double u);

// Differentiation matrix of an order-n polynomial over a domain of the given
// length: (n+1) x n with -1 on the diagonal and +1 on the subdiagonal, scaled
// by n / length. The unit body is cached per order.
struct DiffMatrix {
  const Eigen::MatrixXd* body = nullptr;
  double scale = 1.0;

  Eigen::MatrixXd matrix() const { return scale * (*body); }
};

DiffMatrix differentiation_matrix(int n, double length);

// (n+1) x (n_e+1) elevation matrix E_n^{n_e}; cached per (n, n_e).
const Eigen::MatrixXd& elevation_matrix(int n, int n_e);

class BernsteinPolynomial {
 public:
  // `control_points` holds one control point per row, one component per column.
  BernsteinPolynomial(Eigen::MatrixXd control_points, Interval domain);

  int order() const { return static_cast<int>(control_points_.rows()) - 1; }
  int dim() const { return static_cast<int>(control_points_.cols()); }
  const Interval& domain() const { return domain_; }
  const Eigen::MatrixXd& control_points() const { return control_points_; }

  Eigen::VectorXd evaluate(double x) const;

 private:
  Eigen::MatrixXd control_points_;
  Interval domain_;
};

class BernsteinSurface {
 public:
  BernsteinSurface(std::vector<Eigen::MatrixXd> components, Interval s_domain,
                   Interval t_domain);

  // Scalar surface over [0, L] x [0, T].
  static BernsteinSurface scalar(Eigen::MatrixXd control_points, double L,
                                 double T);
  static BernsteinSurface constant(int m, int n, int dim, double value,
                                   Interval s_domain, Interval t_domain);

  int m() const { return static_cast<int>(components_.front().rows()) - 1; }
  int n() const { return static_cast<int>(components_.front().cols()) - 1; }
  int dim() const { return static_cast<int>(components_.size()); }
  const Interval& s_domain() const { return s_domain_; }
  const Interval& t_domain() const { return t_domain_; }

  const Eigen::MatrixXd& component(int k) const { return components_[k]; }
  const std::vector<Eigen::MatrixXd>& components() const { return components_; }
  Eigen::VectorXd control_point(int i, int j) const;

  // de Casteljau evaluation; throws std::domain_error outside the domain.
  Eigen::VectorXd evaluate(double s, double t) const;
  // Shorthand for scalar surfaces.
  double value(double s, double t) const;

 private:
  std::vector<Eigen::MatrixXd> components_;
  Interval s_domain_;
  Interval t_domain_;
};

enum class Edge { kSStart, kSEnd, kTStart, kTEnd };

struct SurfaceSplit {
  BernsteinSurface first;
  BernsteinSurface second;
  BernsteinPolynomial line;
};

BernsteinSurface add(const BernsteinSurface& g, const BernsteinSurface& h);
BernsteinSurface subtract(const BernsteinSurface& g, const BernsteinSurface& h);
BernsteinSurface scale(const BernsteinSurface& g, double factor);

// Product of two scalar surfaces; orders add.
BernsteinSurface multiply(const BernsteinSurface& g, const BernsteinSurface& h);
// Sum over components of g_k * h_k; yields a scalar surface.
BernsteinSurface dot(const BernsteinSurface& g, const BernsteinSurface& h);

// Raw coefficient product for scalar grids (no domain bookkeeping).
Eigen::MatrixXd product_coefficients(const Eigen::MatrixXd& g,
                                     const Eigen::MatrixXd& h);

// Gradient with respect to g of sum_ef H_ef * product_coefficients(g, h)_ef,
// where g has the given grid shape.
Eigen::MatrixXd product_coefficients_adjoint(const Eigen::MatrixXd& H,
                                             const Eigen::MatrixXd& h, int g_rows,
                                             int g_cols);

BernsteinSurface partial_s(const BernsteinSurface& g);
BernsteinSurface partial_t(const BernsteinSurface& g);

BernsteinSurface elevate(const BernsteinSurface& g, int m_e, int n_e);

// Splits at an interior point; the first piece covers the lower sub-interval.
SurfaceSplit split_s(const BernsteinSurface& g, double s_div);
SurfaceSplit split_t(const BernsteinSurface& g, double t_div);

BernsteinPolynomial edge(const BernsteinSurface& g, Edge which);

}  // namespace rodplan

#endif  // RODPLAN_BERNSTEIN_H_
