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

#include "rodplan/geometry.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace rodplan {
namespace {

using Eigen::Vector3d;

struct Simplex {
  std::array<Vector3d, 4> pts;
  int size = 0;

  void push(const Vector3d& p) { pts[size++] = p; }
};

struct Closest {
  Vector3d v;
  Simplex support;
};

Closest single(const Vector3d& a) {
  Closest out{a, {}};
  out.support.push(a);
  return out;
}

Closest closest_segment(const Vector3d& a, const Vector3d& b) {
  const Vector3d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return single(a);
  const double t = -a.dot(ab) / len2;
  if (t <= 0.0) return single(a);
  if (t >= 1.0) return single(b);
  Closest out{a + t * ab, {}};
  out.support.push(a);
  out.support.push(b);
  return out;
}

Closest better(Closest x, Closest y) {
  return y.v.squaredNorm() < x.v.squaredNorm() ? y : x;
}

// Closest point of triangle abc to the origin, by Voronoi-region tests.
Closest closest_triangle(const Vector3d& a, const Vector3d& b, const Vector3d& c) {
  const Vector3d ab = b - a;
  const Vector3d ac = c - a;
  if (ab.cross(ac).squaredNorm() <=
      1e-24 * std::max(ab.squaredNorm(), ac.squaredNorm()) *
          std::max(ab.squaredNorm(), ac.squaredNorm())) {
    return better(better(closest_segment(a, b), closest_segment(a, c)),
                  closest_segment(b, c));
  }
  const Vector3d ap = -a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return single(a);

  const Vector3d bp = -b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return single(b);

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    Closest out{a + v * ab, {}};
    out.support.push(a);
    out.support.push(b);
    return out;
  }

  const Vector3d cp = -c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return single(c);

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    Closest out{a + w * ac, {}};
    out.support.push(a);
    out.support.push(c);
    return out;
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    Closest out{b + w * (c - b), {}};
    out.support.push(b);
    out.support.push(c);
    return out;
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  Closest out{a + v * ab + w * ac, {}};
  out.support.push(a);
  out.support.push(b);
  out.support.push(c);
  return out;
}

// Returns support size 4 when the origin lies inside the tetrahedron.
Closest closest_tetrahedron(const Vector3d& a, const Vector3d& b,
                            const Vector3d& c, const Vector3d& d) {
  const std::array<std::array<const Vector3d*, 4>, 4> faces = {{
      {&a, &b, &c, &d}, {&a, &c, &d, &b}, {&a, &d, &b, &c}, {&b, &d, &c, &a}}};
  const double scale =
      std::max({(b - a).squaredNorm(), (c - a).squaredNorm(), (d - a).squaredNorm()});
  const double volume = (b - a).cross(c - a).dot(d - a);
  const bool degenerate = std::abs(volume) <= 1e-12 * std::pow(scale, 1.5);

  bool any_outside = false;
  Closest best{Vector3d::Constant(std::numeric_limits<double>::infinity()), {}};
  for (const auto& f : faces) {
    const Vector3d& p0 = *f[0];
    const Vector3d n = (*f[1] - p0).cross(*f[2] - p0);
    const double side_origin = n.dot(-p0);
    const double side_opposite = n.dot(*f[3] - p0);
    if (degenerate || side_origin * side_opposite < 0.0) {
      any_outside = true;
      best = better(best, closest_triangle(*f[0], *f[1], *f[2]));
    }
  }
  if (!any_outside) {
    Closest inside{Vector3d::Zero(), {}};
    inside.support.push(a);
    inside.support.push(b);
    inside.support.push(c);
    inside.support.push(d);
    return inside;
  }
  return best;
}

Closest closest_in_simplex(const Simplex& s) {
  switch (s.size) {
    case 1: return single(s.pts[0]);
    case 2: return closest_segment(s.pts[0], s.pts[1]);
    case 3: return closest_triangle(s.pts[0], s.pts[1], s.pts[2]);
    default: return closest_tetrahedron(s.pts[0], s.pts[1], s.pts[2], s.pts[3]);
  }
}

void check_finite(const std::vector<Vector3d>& pts) {
  for (const auto& p : pts) {
    if (!p.allFinite()) throw std::invalid_argument("non-finite vertex data");
  }
}

// Closest vector of the Minkowski difference of the cores; zero on contact.
Vector3d core_separation(const ConvexShape& a, const ConvexShape& b) {
  constexpr int kMaxIterations = 128;
  constexpr double kRelTol = 1e-13;
  Vector3d v = a.core().front() - b.core().front();
  Simplex simplex;
  simplex.push(v);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const double vv = v.squaredNorm();
    if (vv <= 1e-28) return Vector3d::Zero();
    const Vector3d w = a.core_support(-v) - b.core_support(v);
    if (vv - v.dot(w) <= kRelTol * vv) break;
    bool repeated = false;
    for (int k = 0; k < simplex.size; ++k) {
      if ((simplex.pts[k] - w).squaredNorm() <= 1e-30) repeated = true;
    }
    if (repeated) break;
    Simplex candidate = simplex;
    candidate.push(w);
    const Closest c = closest_in_simplex(candidate);
    if (c.support.size == 4) return Vector3d::Zero();
    if (c.v.squaredNorm() >= vv) break;  // no progress left in floating point
    v = c.v;
    simplex = c.support;
  }
  return v;
}

}  // namespace

ConvexShape::ConvexShape(Kind kind, std::vector<Eigen::Vector3d> core, double margin)
    : kind_(kind), core_(std::move(core)), margin_(margin) {
  if (core_.empty()) throw std::invalid_argument("convex shape needs a vertex");
  check_finite(core_);
  if (!std::isfinite(margin_) || margin_ < 0.0) {
    throw std::invalid_argument("invalid shape margin");
  }
}

ConvexShape ConvexShape::polytope(std::vector<Eigen::Vector3d> vertices) {
  return ConvexShape(Kind::kPolytope, std::move(vertices), 0.0);
}

ConvexShape ConvexShape::box(const Eigen::Vector3d& center, double edge) {
  if (!(edge > 0.0)) throw std::invalid_argument("box edge must be > 0");
  std::vector<Eigen::Vector3d> v;
  const double h = 0.5 * edge;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) v.push_back(center + h * Eigen::Vector3d(sx, sy, sz));
  return polytope(std::move(v));
}

ConvexShape ConvexShape::sphere(const Eigen::Vector3d& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be > 0");
  return ConvexShape(Kind::kSphere, {center}, radius);
}

ConvexShape ConvexShape::point(const Eigen::Vector3d& p) {
  return ConvexShape(Kind::kPoint, {p}, 0.0);
}

ConvexShape ConvexShape::control_cloud(const BernsteinSurface& surface) {
  if (surface.dim() != 3) {
    throw std::invalid_argument("control cloud needs an R^3-valued surface");
  }
  std::vector<Eigen::Vector3d> pts;
  pts.reserve((surface.m() + 1) * (surface.n() + 1));
  const auto& x = surface.component(0);
  const auto& y = surface.component(1);
  const auto& z = surface.component(2);
  for (int i = 0; i <= surface.m(); ++i)
    for (int j = 0; j <= surface.n(); ++j) pts.emplace_back(x(i, j), y(i, j), z(i, j));
  return ConvexShape(Kind::kControlCloud, std::move(pts), 0.0);
}

Eigen::Vector3d ConvexShape::core_support(const Eigen::Vector3d& direction) const {
  if (core_.size() == 1) return core_.front();
  std::size_t best = 0;
  double best_dot = core_[0].dot(direction);
  for (std::size_t k = 1; k < core_.size(); ++k) {
    const double d = core_[k].dot(direction);
    if (d > best_dot) {
      best_dot = d;
      best = k;
    }
  }
  return core_[best];
}

Eigen::Vector3d ConvexShape::support(const Eigen::Vector3d& direction) const {
  Eigen::Vector3d p = core_support(direction);
  const double norm = direction.norm();
  if (margin_ > 0.0 && norm > 0.0) p += margin_ * direction / norm;
  return p;
}

ConvexShape ConvexShape::translated(const Eigen::Vector3d& offset) const {
  std::vector<Eigen::Vector3d> moved = core_;
  for (auto& p : moved) p += offset;
  return ConvexShape(kind_, std::move(moved), margin_);
}

double gjk_distance(const ConvexShape& a, const ConvexShape& b) {
  return std::max(0.0, core_separation(a, b).norm() - a.margin() - b.margin());
}

Separation gjk_separation(const ConvexShape& a, const ConvexShape& b) {
  const Vector3d v = core_separation(a, b);
  const double core = v.norm();
  Separation out;
  out.distance = std::max(0.0, core - a.margin() - b.margin());
  if (out.distance > 0.0) out.direction = v / core;
  return out;
}

double lower_bound(const BernsteinSurface& surface, const ConvexShape& obstacle) {
  return gjk_distance(ConvexShape::control_cloud(surface), obstacle);
}

double upper_bound(const BernsteinSurface& surface, const ConvexShape& obstacle) {
  if (surface.dim() != 3) {
    throw std::invalid_argument("upper_bound needs an R^3-valued surface");
  }
  const int m = surface.m();
  const int n = surface.n();
  double best = std::numeric_limits<double>::infinity();
  for (auto [i, j] : {std::pair{0, 0}, std::pair{0, n}, std::pair{m, 0}, std::pair{m, n}}) {
    const Eigen::Vector3d corner = surface.control_point(i, j);
    best = std::min(best, gjk_distance(ConvexShape::point(corner), obstacle));
  }
  return best;
}

MinDistDepthError::MinDistDepthError(double lower, double upper)
    : std::runtime_error("min_dist exceeded max depth; bracket [" +
                         std::to_string(lower) + ", " + std::to_string(upper) + "]"),
      lower_(lower),
      upper_(upper) {}

namespace {

struct MinDistState {
  const ConvexShape* obstacle;
  double epsilon;
  int max_depth;
  bool record;
  MinDistResult* result;
};

// upper_bound, also reporting which corner attains it.
double corner_bound(const BernsteinSurface& patch, const ConvexShape& obstacle, double& s,
                    double& t) {
  const int m = patch.m();
  const int n = patch.n();
  double best = std::numeric_limits<double>::infinity();
  for (auto [i, j] : {std::pair{0, 0}, std::pair{0, n}, std::pair{m, 0}, std::pair{m, n}}) {
    const double d = gjk_distance(ConvexShape::point(patch.control_point(i, j)), obstacle);
    if (d < best) {
      best = d;
      s = i == 0 ? patch.s_domain().lo : patch.s_domain().hi;
      t = j == 0 ? patch.t_domain().lo : patch.t_domain().hi;
    }
  }
  return best;
}

double min_dist_node(const BernsteinSurface& patch, double alpha, int depth,
                     MinDistState& st) {
  ++st.result->nodes;
  double cs = 0.0, ct = 0.0;
  const double upper = corner_bound(patch, *st.obstacle, cs, ct);
  const double lower = lower_bound(patch, *st.obstacle);
  MinDistNode node{depth, patch.s_domain(), patch.t_domain(), lower, upper, alpha, alpha,
                   NodeExit::kSplit};
  auto finish = [&](double a, NodeExit exit) {
    if (st.record) {
      node.alpha_out = a;
      node.exit = exit;
      st.result->trace.push_back(node);
    }
    return a;
  };

  if (upper < alpha) {
    alpha = upper;
    st.result->s = cs;
    st.result->t = ct;
  }
  if (alpha < lower) return finish(alpha, NodeExit::kPruned);
  if (upper - lower < st.epsilon) return finish(alpha, NodeExit::kConverged);
  if (depth >= st.max_depth) {
    throw MinDistDepthError(std::min(lower, alpha), alpha);
  }

  const bool along_s = depth % 2 == 0;
  const Interval& iv = along_s ? patch.s_domain() : patch.t_domain();
  const double mid = 0.5 * (iv.lo + iv.hi);
  SurfaceSplit parts = along_s ? split_s(patch, mid) : split_t(patch, mid);
  // Static obstacle: deCast(Q) yields Q twice, so the four calls reduce to two.
  alpha = std::min(alpha, min_dist_node(parts.first, alpha, depth + 1, st));
  alpha = std::min(alpha, min_dist_node(parts.second, alpha, depth + 1, st));
  return finish(alpha, NodeExit::kSplit);
}

}  // namespace

MinDistResult min_dist(const SeparationQuery& query, bool record_trace) {
  if (query.surface == nullptr || query.obstacle == nullptr) {
    throw std::invalid_argument("min_dist: missing surface or obstacle");
  }
  if (!(query.epsilon > 0.0)) throw std::invalid_argument("min_dist: epsilon must be > 0");
  if (query.max_depth < 1) throw std::invalid_argument("min_dist: max_depth must be >= 1");
  MinDistResult result;
  MinDistState st{query.obstacle, query.epsilon, query.max_depth, record_trace, &result};
  double alpha = query.alpha;
  if (std::isnan(alpha)) {
    alpha = corner_bound(*query.surface, *query.obstacle, result.s, result.t);
  }
  result.distance = min_dist_node(*query.surface, alpha, 0, st);
  return result;
}

SurfaceWitness refine_witness(const BernsteinSurface& surface, const ConvexShape& obstacle,
                              double s0, double t0, int max_iter) {
  if (surface.dim() != 3) throw std::invalid_argument("refine_witness needs an R^3 surface");
  const Interval sd = surface.s_domain();
  const Interval td = surface.t_domain();
  const BernsteinSurface ps = partial_s(surface);
  const BernsteinSurface pt = partial_t(surface);
  // Work in unit coordinates so both directions are comparably scaled.
  auto eval = [&](const Eigen::Vector2d& u, Eigen::Vector2d* grad) {
    const double s = std::clamp(sd.lo + u(0) * sd.length(), sd.lo, sd.hi);
    const double t = std::clamp(td.lo + u(1) * td.length(), td.lo, td.hi);
    const Separation sep = gjk_separation(ConvexShape::point(Eigen::Vector3d(surface.evaluate(s, t))), obstacle);
    if (grad) {
      (*grad)(0) = sep.direction.dot(Eigen::Vector3d(ps.evaluate(s, t))) * sd.length();
      (*grad)(1) = sep.direction.dot(Eigen::Vector3d(pt.evaluate(s, t))) * td.length();
    }
    return sep;
  };
  auto project = [](Eigen::Vector2d u) { return u.cwiseMax(0.0).cwiseMin(1.0); };

  Eigen::Vector2d u((s0 - sd.lo) / sd.length(), (t0 - td.lo) / td.length());
  u = project(u);
  Eigen::Vector2d g;
  Separation cur = eval(u, &g);
  for (int it = 0; it < max_iter && cur.distance > 0.0; ++it) {
    // Coordinates pinned at the box with an outward gradient stay put.
    std::array<bool, 2> active{};
    for (int k = 0; k < 2; ++k) {
      active[k] = (u(k) <= 0.0 && g(k) > 0.0) || (u(k) >= 1.0 && g(k) < 0.0);
    }
    Eigen::Matrix2d h;
    constexpr double kStep = 1e-7;
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d up = u, um = u, gp, gm;
      up(k) = std::min(1.0, u(k) + kStep);
      um(k) = std::max(0.0, u(k) - kStep);
      eval(up, &gp);
      eval(um, &gm);
      h.col(k) = (gp - gm) / (up(k) - um(k));
    }
    h = 0.5 * (h + h.transpose());
    Eigen::Vector2d d = Eigen::Vector2d::Zero();
    if (!active[0] && !active[1]) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(h);
      if (eig.eigenvalues().minCoeff() > 1e-12) d = -h.ldlt().solve(g);
      else d = -g;
    } else {
      for (int k = 0; k < 2; ++k) {
        if (!active[k]) d(k) = h(k, k) > 1e-12 ? -g(k) / h(k, k) : -g(k);
      }
    }
    if (d.norm() < 1e-14) break;
    double step = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      const Eigen::Vector2d un = project(u + step * d);
      Eigen::Vector2d gn;
      const Separation next = eval(un, &gn);
      if (next.distance < cur.distance) {
        moved = (un - u).norm() > 1e-15;
        u = un;
        g = gn;
        cur = next;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  SurfaceWitness w;
  w.distance = cur.distance;
  w.s = std::clamp(sd.lo + u(0) * sd.length(), sd.lo, sd.hi);
  w.t = std::clamp(td.lo + u(1) * td.length(), td.lo, td.hi);
  w.normal = cur.direction;
  return w;
}

std::vector<double> clearance_constraint(const BernsteinSurface& surface,
                                         const std::vector<ConvexShape>& obstacles,
                                         double d_safe, double epsilon,
                                         int max_depth) {
  if (!(d_safe > 0.0)) throw std::invalid_argument("d_safe must be > 0");
  std::vector<double> residuals;
  residuals.reserve(obstacles.size());
  for (const auto& obstacle : obstacles) {
    SeparationQuery q;
    q.surface = &surface;
    q.obstacle = &obstacle;
    q.epsilon = epsilon;
    q.d_safe = d_safe;
    q.max_depth = max_depth;
    residuals.push_back(min_dist(q).distance - d_safe);
  }
  return residuals;
}

}  // namespace rodplan
