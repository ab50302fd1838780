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

#ifndef RODPLAN_GEOMETRY_H_
#define RODPLAN_GEOMETRY_H_

#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rodplan/bernstein.h"

namespace rodplan {

// A convex solid seen through its support function. Spheres are kept as a
// center plus margin so that GJK runs on the core point exactly.
class ConvexShape {
 public:
  enum class Kind { kPolytope, kSphere, kPoint, kControlCloud };

  static ConvexShape polytope(std::vector<Eigen::Vector3d> vertices);
  // Axis-aligned cube with the given edge length, as its 8 vertices.
  static ConvexShape box(const Eigen::Vector3d& center, double edge);
  static ConvexShape sphere(const Eigen::Vector3d& center, double radius);
  static ConvexShape point(const Eigen::Vector3d& p);
  // Convex hull of the control points of an R^3-valued surface.
  static ConvexShape control_cloud(const BernsteinSurface& surface);

  Kind kind() const { return kind_; }
  // Core vertices; a sphere's core is its center.
  const std::vector<Eigen::Vector3d>& core() const { return core_; }
  double margin() const { return margin_; }

  Eigen::Vector3d support(const Eigen::Vector3d& direction) const;
  Eigen::Vector3d core_support(const Eigen::Vector3d& direction) const;

  ConvexShape translated(const Eigen::Vector3d& offset) const;

 private:
  ConvexShape(Kind kind, std::vector<Eigen::Vector3d> core, double margin);

  Kind kind_;
  std::vector<Eigen::Vector3d> core_;
  double margin_ = 0.0;
};

// Minimum Euclidean distance between two convex shapes; 0 when they touch or
// overlap.
double gjk_distance(const ConvexShape& a, const ConvexShape& b);

struct Separation {
  double distance = 0.0;
  // Unit vector pointing from b toward a; zero when the shapes touch.
  Eigen::Vector3d direction = Eigen::Vector3d::Zero();
};

// gjk_distance plus the direction along which it grows fastest when a moves.
Separation gjk_separation(const ConvexShape& a, const ConvexShape& b);

// Hull-based bound: never above the true surface-obstacle separation.
double lower_bound(const BernsteinSurface& surface, const ConvexShape& obstacle);
// Corner-based bound: the corners lie on the surface, so this never falls
// below the true separation.
double upper_bound(const BernsteinSurface& surface, const ConvexShape& obstacle);

struct SeparationQuery {
  const BernsteinSurface* surface = nullptr;
  const ConvexShape* obstacle = nullptr;
  // Running upper bound; NaN means "start from the root upper bound".
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double epsilon = 1e-4;
  double d_safe = 0.0;
  int max_depth = 40;
};

enum class NodeExit { kPruned, kConverged, kSplit };

struct MinDistNode {
  int depth = 0;
  Interval s_domain;
  Interval t_domain;
  double lower = 0.0;
  double upper = 0.0;
  double alpha_in = 0.0;
  double alpha_out = 0.0;
  NodeExit exit = NodeExit::kConverged;
};

struct MinDistResult {
  double distance = 0.0;
  // Surface parameters of the corner that attains distance; NaN when the
  // query's alpha was never improved.
  double s = std::numeric_limits<double>::quiet_NaN();
  double t = std::numeric_limits<double>::quiet_NaN();
  int nodes = 0;
  std::vector<MinDistNode> trace;  // filled only when requested
};

class MinDistDepthError : public std::runtime_error {
 public:
  MinDistDepthError(double lower, double upper);
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

// Branch-and-bound minimum separation between a position surface and a convex
// obstacle. Splits alternate between s and t midpoints by depth; static
// obstacles are not subdivided.
MinDistResult min_dist(const SeparationQuery& query, bool record_trace = false);

struct SurfaceWitness {
  double distance = 0.0;
  double s = 0.0;
  double t = 0.0;
  // Unit vector from the obstacle toward p(s, t); zero on contact.
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();
};

// Local descent of |p(s, t) - obstacle| over the surface domain starting from
// (s0, t0). The result never exceeds the starting distance.
SurfaceWitness refine_witness(const BernsteinSurface& surface, const ConvexShape& obstacle,
                              double s0, double t0, int max_iter = 30);

// One residual per obstacle: min_dist - d_safe.
std::vector<double> clearance_constraint(const BernsteinSurface& surface,
                                         const std::vector<ConvexShape>& obstacles,
                                         double d_safe, double epsilon,
                                         int max_depth = 40);

}  // namespace rodplan

#endif  // RODPLAN_GEOMETRY_H_
