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

#include "rodplan/bernstein.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

namespace rodplan {
namespace {

constexpr double kDomainSlack = 1e-12;

void check_same_domains(const BernsteinSurface& g, const BernsteinSurface& h) {
  if (!(g.s_domain() == h.s_domain()) || !(g.t_domain() == h.t_domain())) {
    throw std::invalid_argument("Bernstein surfaces have different domains");
  }
}

void check_interval(const Interval& iv, const char* name) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.hi > iv.lo)) {
    throw std::invalid_argument(std::string("degenerate ") + name + " domain");
  }
}

double to_unit(const Interval& iv, double x) {
  if (!iv.contains(x)) {
    throw std::domain_error("evaluation point " + std::to_string(x) +
                            " outside [" + std::to_string(iv.lo) + ", " +
                            std::to_string(iv.hi) + "]");
  }
  return std::clamp((x - iv.lo) / iv.length(), 0.0, 1.0);
}

// Splits the coefficient column `c` at u, writing both halves.
void split_coefficients(const Eigen::VectorXd& c, double u, Eigen::VectorXd& left,
                        Eigen::VectorXd& right) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::VectorXd work = c;
  left.resize(n + 1);
  right.resize(n + 1);
  left(0) = work(0);
  right(n) = work(n);
  for (int r = 1; r <= n; ++r) {
    for (int k = 0; k <= n - r; ++k) {
      work(k) = (1.0 - u) * work(k) + u * work(k + 1);
    }
    left(r) = work(0);
    right(n - r) = work(n - r);
  }
}

}  // namespace

bool Interval::contains(double x) const {
  const double slack = kDomainSlack * std::max(1.0, std::abs(length()));
  return x >= lo - slack && x <= hi + slack;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return std::round(result);
}

double bernstein_basis(int n, int i, double u) {
  if (i < 0 || i > n) return 0.0;
  return binomial(n, i) * std::pow(u, i) * std::pow(1.0 - u, n - i);
}

double de_casteljau(std::span<const double> coeffs, double u) {
  if (coeffs.empty()) throw std::invalid_argument("empty coefficient list");
  // Orders stay small; a stack buffer covers the common case.
  constexpr std::size_t kStack = 64;
  double stack_buf[kStack];
  std::vector<double> heap_buf;
  double* work = stack_buf;
  if (coeffs.size() > kStack) {
    heap_buf.assign(coeffs.begin(), coeffs.end());
    work = heap_buf.data();
  } else {
    std::copy(coeffs.begin(), coeffs.end(), work);
  }
  const std::size_t n = coeffs.size() - 1;
  const double v = 1.0 - u;
  for (std::size_t r = 1; r <= n; ++r) {
    for (std::size_t k = 0; k <= n - r; ++k) {
      work[k] = v * work[k] + u * work[k + 1];
    }
  }
  return work[0];
}

DiffMatrix differentiation_matrix(int n, double length) {
  if (n < 1) throw std::invalid_argument("differentiation needs order >= 1");
  if (!(length > 0.0)) throw std::invalid_argument("domain length must be > 0");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const Eigen::MatrixXd>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    Eigen::MatrixXd body = Eigen::MatrixXd::Zero(n + 1, n);
    for (int k = 0; k < n; ++k) {
      body(k, k) = -1.0;
      body(k + 1, k) = 1.0;
    }
    slot = std::make_unique<const Eigen::MatrixXd>(std::move(body));
  }
  return DiffMatrix{slot.get(), n / length};
}

const Eigen::MatrixXd& elevation_matrix(int n, int n_e) {
  if (n < 0 || n_e < n) {
    throw std::invalid_argument("elevation target order below source order");
  }
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<const Eigen::MatrixXd>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, n_e}];
  if (!slot) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n + 1, n_e + 1);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n_e - n; ++j) {
        e(i, i + j) =
            binomial(n_e - n, j) * binomial(n, i) / binomial(n_e, i + j);
      }
    }
    slot = std::make_unique<const Eigen::MatrixXd>(std::move(e));
  }
  return *slot;
}

BernsteinPolynomial::BernsteinPolynomial(Eigen::MatrixXd control_points,
                                         Interval domain)
    : control_points_(std::move(control_points)), domain_(domain) {
  if (control_points_.rows() < 1 || control_points_.cols() < 1) {
    throw std::invalid_argument("polynomial needs at least one control point");
  }
  check_interval(domain_, "polynomial");
}

Eigen::VectorXd BernsteinPolynomial::evaluate(double x) const {
  const double u = to_unit(domain_, x);
  Eigen::VectorXd out(dim());
  for (int k = 0; k < dim(); ++k) {
    const Eigen::VectorXd col = control_points_.col(k);
    out(k) = de_casteljau(std::span<const double>(col.data(), col.size()), u);
  }
  return out;
}

BernsteinSurface::BernsteinSurface(std::vector<Eigen::MatrixXd> components,
                                   Interval s_domain, Interval t_domain)
    : components_(std::move(components)),
      s_domain_(s_domain),
      t_domain_(t_domain) {
  if (components_.empty()) {
    throw std::invalid_argument("surface needs at least one component");
  }
  const auto rows = components_.front().rows();
  const auto cols = components_.front().cols();
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("control-point grid must be nonempty");
  }
  for (const auto& c : components_) {
    if (c.rows() != rows || c.cols() != cols) {
      throw std::invalid_argument("control-point grid dimensions disagree");
    }
    if (!c.allFinite()) {
      throw std::invalid_argument("non-finite control point");
    }
  }
  check_interval(s_domain_, "s");
  check_interval(t_domain_, "t");
}

BernsteinSurface BernsteinSurface::scalar(Eigen::MatrixXd control_points,
                                          double L, double T) {
  return BernsteinSurface({std::move(control_points)}, Interval{0.0, L},
                          Interval{0.0, T});
}

BernsteinSurface BernsteinSurface::constant(int m, int n, int dim, double value,
                                            Interval s_domain,
                                            Interval t_domain) {
  std::vector<Eigen::MatrixXd> comps(
      dim, Eigen::MatrixXd::Constant(m + 1, n + 1, value));
  return BernsteinSurface(std::move(comps), s_domain, t_domain);
}

Eigen::VectorXd BernsteinSurface::control_point(int i, int j) const {
  Eigen::VectorXd out(dim());
  for (int k = 0; k < dim(); ++k) out(k) = components_[k](i, j);
  return out;
}

Eigen::VectorXd BernsteinSurface::evaluate(double s, double t) const {
  const double u = to_unit(s_domain_, s);
  const double w = to_unit(t_domain_, t);
  Eigen::VectorXd out(dim());
  std::vector<double> along_s(m() + 1);
  std::vector<double> row(n() + 1);
  for (int k = 0; k < dim(); ++k) {
    const auto& c = components_[k];
    for (int i = 0; i <= m(); ++i) {
      for (int j = 0; j <= n(); ++j) row[j] = c(i, j);
      along_s[i] = de_casteljau(row, w);
    }
    out(k) = de_casteljau(along_s, u);
  }
  return out;
}

double BernsteinSurface::value(double s, double t) const {
  if (dim() != 1) throw std::invalid_argument("value() needs a scalar surface");
  return evaluate(s, t)(0);
}

BernsteinSurface add(const BernsteinSurface& g, const BernsteinSurface& h) {
  check_same_domains(g, h);
  if (g.m() != h.m() || g.n() != h.n() || g.dim() != h.dim()) {
    throw std::invalid_argument("add: order or dimension mismatch");
  }
  std::vector<Eigen::MatrixXd> out(g.dim());
  for (int k = 0; k < g.dim(); ++k) out[k] = g.component(k) + h.component(k);
  return BernsteinSurface(std::move(out), g.s_domain(), g.t_domain());
}

BernsteinSurface subtract(const BernsteinSurface& g, const BernsteinSurface& h) {
  check_same_domains(g, h);
  if (g.m() != h.m() || g.n() != h.n() || g.dim() != h.dim()) {
    throw std::invalid_argument("subtract: order or dimension mismatch");
  }
  std::vector<Eigen::MatrixXd> out(g.dim());
  for (int k = 0; k < g.dim(); ++k) out[k] = g.component(k) - h.component(k);
  return BernsteinSurface(std::move(out), g.s_domain(), g.t_domain());
}

BernsteinSurface scale(const BernsteinSurface& g, double factor) {
  std::vector<Eigen::MatrixXd> out(g.dim());
  for (int k = 0; k < g.dim(); ++k) out[k] = factor * g.component(k);
  return BernsteinSurface(std::move(out), g.s_domain(), g.t_domain());
}

Eigen::MatrixXd product_coefficients(const Eigen::MatrixXd& g,
                                     const Eigen::MatrixXd& h) {
  const int m = static_cast<int>(g.rows()) - 1;
  const int n = static_cast<int>(g.cols()) - 1;
  const int a = static_cast<int>(h.rows()) - 1;
  const int b = static_cast<int>(h.cols()) - 1;
  // Scaling by binomials turns the product into a plain 2-D convolution.
  Eigen::MatrixXd gs(m + 1, n + 1);
  Eigen::MatrixXd hs(a + 1, b + 1);
  for (int q = 0; q <= m; ++q)
    for (int r = 0; r <= n; ++r) gs(q, r) = binomial(m, q) * binomial(n, r) * g(q, r);
  for (int q = 0; q <= a; ++q)
    for (int r = 0; r <= b; ++r) hs(q, r) = binomial(a, q) * binomial(b, r) * h(q, r);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(m + a + 1, n + b + 1);
  for (int q = 0; q <= m; ++q)
    for (int r = 0; r <= n; ++r) {
      const double gv = gs(q, r);
      if (gv == 0.0) continue;
      y.block(q, r, a + 1, b + 1) += gv * hs;
    }
  for (int e = 0; e <= m + a; ++e)
    for (int f = 0; f <= n + b; ++f)
      y(e, f) /= binomial(m + a, e) * binomial(n + b, f);
  return y;
}

Eigen::MatrixXd product_coefficients_adjoint(const Eigen::MatrixXd& H,
                                             const Eigen::MatrixXd& h, int g_rows,
                                             int g_cols) {
  const int m = g_rows - 1;
  const int n = g_cols - 1;
  const int a = static_cast<int>(h.rows()) - 1;
  const int b = static_cast<int>(h.cols()) - 1;
  if (H.rows() != m + a + 1 || H.cols() != n + b + 1) {
    throw std::invalid_argument("product adjoint: weight grid has the wrong shape");
  }
  Eigen::MatrixXd hs(a + 1, b + 1);
  for (int q = 0; q <= a; ++q)
    for (int r = 0; r <= b; ++r) hs(q, r) = binomial(a, q) * binomial(b, r) * h(q, r);
  Eigen::MatrixXd Hs(m + a + 1, n + b + 1);
  for (int e = 0; e <= m + a; ++e)
    for (int f = 0; f <= n + b; ++f)
      Hs(e, f) = H(e, f) / (binomial(m + a, e) * binomial(n + b, f));
  Eigen::MatrixXd out(m + 1, n + 1);
  for (int q = 0; q <= m; ++q)
    for (int r = 0; r <= n; ++r)
      out(q, r) = binomial(m, q) * binomial(n, r) *
                  Hs.block(q, r, a + 1, b + 1).cwiseProduct(hs).sum();
  return out;
}

BernsteinSurface multiply(const BernsteinSurface& g, const BernsteinSurface& h) {
  check_same_domains(g, h);
  if (g.dim() != 1 || h.dim() != 1) {
    throw std::invalid_argument("multiply: operands must be scalar surfaces");
  }
  return BernsteinSurface({product_coefficients(g.component(0), h.component(0))},
                          g.s_domain(), g.t_domain());
}

BernsteinSurface dot(const BernsteinSurface& g, const BernsteinSurface& h) {
  check_same_domains(g, h);
  if (g.dim() != h.dim()) throw std::invalid_argument("dot: dimension mismatch");
  Eigen::MatrixXd acc = product_coefficients(g.component(0), h.component(0));
  for (int k = 1; k < g.dim(); ++k) {
    acc += product_coefficients(g.component(k), h.component(k));
  }
  return BernsteinSurface({std::move(acc)}, g.s_domain(), g.t_domain());
}

BernsteinSurface partial_s(const BernsteinSurface& g) {
  if (g.m() < 1) throw std::invalid_argument("partial_s of an order-0 direction");
  const DiffMatrix d = differentiation_matrix(g.m(), g.s_domain().length());
  std::vector<Eigen::MatrixXd> out(g.dim());
  for (int k = 0; k < g.dim(); ++k) {
    out[k] = d.scale * (d.body->transpose() * g.component(k));
  }
  return BernsteinSurface(std::move(out), g.s_domain(), g.t_domain());
}

BernsteinSurface partial_t(const BernsteinSurface& g) {
  if (g.n() < 1) throw std::invalid_argument("partial_t of an order-0 direction");
  const DiffMatrix d = differentiation_matrix(g.n(), g.t_domain().length());
  std::vector<Eigen::MatrixXd> out(g.dim());
  for (int k = 0; k < g.dim(); ++k) {
    out[k] = d.scale * (g.component(k) * (*d.body));
  }
  return BernsteinSurface(std::move(out), g.s_domain(), g.t_domain());
}

BernsteinSurface elevate(const BernsteinSurface& g, int m_e, int n_e) {
  if (m_e < g.m() || n_e < g.n()) {
    throw std::invalid_argument("elevate: target orders below current orders");
  }
  const Eigen::MatrixXd& em = elevation_matrix(g.m(), m_e);
  const Eigen::MatrixXd& en = elevation_matrix(g.n(), n_e);
  std::vector<Eigen::MatrixXd> out(g.dim());
  for (int k = 0; k < g.dim(); ++k) {
    out[k] = em.transpose() * g.component(k) * en;
  }
  return BernsteinSurface(std::move(out), g.s_domain(), g.t_domain());
}

SurfaceSplit split_s(const BernsteinSurface& g, double s_div) {
  const Interval& sd = g.s_domain();
  if (!(s_div > sd.lo && s_div < sd.hi)) {
    throw std::invalid_argument("split_s: division point not interior");
  }
  const double u = (s_div - sd.lo) / sd.length();
  std::vector<Eigen::MatrixXd> first(g.dim()), second(g.dim());
  Eigen::MatrixXd line(g.n() + 1, g.dim());
  Eigen::VectorXd left, right;
  for (int k = 0; k < g.dim(); ++k) {
    first[k].resize(g.m() + 1, g.n() + 1);
    second[k].resize(g.m() + 1, g.n() + 1);
    for (int j = 0; j <= g.n(); ++j) {
      split_coefficients(g.component(k).col(j), u, left, right);
      first[k].col(j) = left;
      second[k].col(j) = right;
      line(j, k) = left(g.m());
    }
  }
  return SurfaceSplit{
      BernsteinSurface(std::move(first), Interval{sd.lo, s_div}, g.t_domain()),
      BernsteinSurface(std::move(second), Interval{s_div, sd.hi}, g.t_domain()),
      BernsteinPolynomial(std::move(line), g.t_domain())};
}

SurfaceSplit split_t(const BernsteinSurface& g, double t_div) {
  const Interval& td = g.t_domain();
  if (!(t_div > td.lo && t_div < td.hi)) {
    throw std::invalid_argument("split_t: division point not interior");
  }
  const double w = (t_div - td.lo) / td.length();
  std::vector<Eigen::MatrixXd> first(g.dim()), second(g.dim());
  Eigen::MatrixXd line(g.m() + 1, g.dim());
  Eigen::VectorXd left, right;
  for (int k = 0; k < g.dim(); ++k) {
    first[k].resize(g.m() + 1, g.n() + 1);
    second[k].resize(g.m() + 1, g.n() + 1);
    for (int i = 0; i <= g.m(); ++i) {
      split_coefficients(g.component(k).row(i).transpose(), w, left, right);
      first[k].row(i) = left.transpose();
      second[k].row(i) = right.transpose();
      line(i, k) = left(g.n());
    }
  }
  return SurfaceSplit{
      BernsteinSurface(std::move(first), g.s_domain(), Interval{td.lo, t_div}),
      BernsteinSurface(std::move(second), g.s_domain(), Interval{t_div, td.hi}),
      BernsteinPolynomial(std::move(line), g.s_domain())};
}

BernsteinPolynomial edge(const BernsteinSurface& g, Edge which) {
  const bool along_s = which == Edge::kTStart || which == Edge::kTEnd;
  const int count = along_s ? g.m() + 1 : g.n() + 1;
  Eigen::MatrixXd cps(count, g.dim());
  for (int k = 0; k < g.dim(); ++k) {
    const auto& c = g.component(k);
    switch (which) {
      case Edge::kTStart: cps.col(k) = c.col(0); break;
      case Edge::kTEnd: cps.col(k) = c.col(g.n()); break;
      case Edge::kSStart: cps.col(k) = c.row(0).transpose(); break;
      case Edge::kSEnd: cps.col(k) = c.row(g.m()).transpose(); break;
    }
  }
  return BernsteinPolynomial(std::move(cps), along_s ? g.s_domain() : g.t_domain());
}

}  // namespace rodplan
