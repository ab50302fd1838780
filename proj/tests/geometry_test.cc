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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "rodplan/geometry.h"
#include "test_util.h"

namespace rodplan {
namespace {

using Eigen::Vector3d;

std::vector<Vector3d> random_points(std::mt19937_64& rng, int count, const Vector3d& center,
                                    double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<Vector3d> pts;
  for (int k = 0; k < count; ++k) pts.push_back(center + Vector3d(u(rng), u(rng), u(rng)));
  return pts;
}

Eigen::Matrix3Xd as_matrix(const std::vector<Vector3d>& pts) {
  Eigen::Matrix3Xd m(3, pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) m.col(k) = pts[k];
  return m;
}

BernsteinSurface flat_unit_square() {
  Eigen::MatrixXd x(2, 2), y(2, 2), z = Eigen::MatrixXd::Zero(2, 2);
  x << 0, 0, 1, 1;
  y << 0, 1, 0, 1;
  return BernsteinSurface({x, y, z}, {0.0, 1.0}, {0.0, 1.0});
}

TEST(Gjk, PointSphere) {
  const ConvexShape s = ConvexShape::sphere({1.0, 2.0, 3.0}, 0.5);
  EXPECT_NEAR(gjk_distance(ConvexShape::point({1.0, 2.0, 6.0}), s), 2.5, 1e-12);
  EXPECT_NEAR(gjk_distance(ConvexShape::point({1.0, 2.0, 3.2}), s), 0.0, 1e-12);
}

TEST(Gjk, SphereSphereAndSymmetry) {
  const ConvexShape a = ConvexShape::sphere({0, 0, 0}, 1.0);
  const ConvexShape b = ConvexShape::sphere({3, 4, 0}, 1.5);
  EXPECT_NEAR(gjk_distance(a, b), 2.5, 1e-12);
  EXPECT_NEAR(gjk_distance(b, a), 2.5, 1e-12);
}

TEST(Gjk, PointCubeFaceEdgeCorner) {
  const ConvexShape cube = ConvexShape::box({0, 0, 0}, 2.0);
  EXPECT_NEAR(gjk_distance(ConvexShape::point({3, 0, 0}), cube), 2.0, 1e-12);
  EXPECT_NEAR(gjk_distance(ConvexShape::point({2, 2, 0}), cube), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(gjk_distance(ConvexShape::point({2, 2, 2}), cube), std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(gjk_distance(ConvexShape::point({0.5, 0.2, -0.3}), cube), 0.0, 1e-12);
}

TEST(Gjk, StartVertexFartherThanFirstSupport) {
  // The first support point is farther from the origin than the start vertex,
  // but the segment between them is closer than either.
  const ConvexShape seg = ConvexShape::polytope({{0, 0, 1}, {5, 0, 0.5}});
  const ConvexShape origin = ConvexShape::point({0, 0, 0});
  const double x = 0.2 / 2.02;
  EXPECT_NEAR(gjk_distance(seg, origin), std::hypot(x, 1.0 - 0.1 * x), 1e-12);
}

TEST(Gjk, RandomPolytopesMatchHullOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const auto a = random_points(rng, 4 + trial % 5, {0, 0, 0}, 0.5);
    const auto b = random_points(rng, 4 + trial % 3, {1.2, 0.3 * trial / 15.0, -0.4}, 0.5);
    const double expect = oracle::hull_distance(as_matrix(a), as_matrix(b));
    EXPECT_NEAR(gjk_distance(ConvexShape::polytope(a), ConvexShape::polytope(b)), expect, 1e-6)
        << "trial " << trial;
  }
}

TEST(Gjk, TranslationInvariance) {
  std::mt19937_64 rng(22);
  const auto a = random_points(rng, 6, {0, 0, 0}, 0.5);
  const auto b = random_points(rng, 6, {2, 0, 0}, 0.5);
  const ConvexShape pa = ConvexShape::polytope(a), pb = ConvexShape::polytope(b);
  const Vector3d off(10.0, -3.0, 7.0);
  EXPECT_NEAR(gjk_distance(pa, pb), gjk_distance(pa.translated(off), pb.translated(off)), 1e-12);
}

TEST(Gjk, SeparationDirectionPointsAway) {
  const ConvexShape s = ConvexShape::sphere({0, 0, 0}, 1.0);
  const Separation sep = gjk_separation(ConvexShape::point({0, 3, 0}), s);
  EXPECT_NEAR(sep.distance, 2.0, 1e-12);
  EXPECT_TRUE(sep.direction.isApprox(Vector3d(0, 1, 0), 1e-12));
}

TEST(Gjk, RejectsBadShapes) {
  EXPECT_THROW(ConvexShape::sphere({0, 0, 0}, -1.0), std::invalid_argument);
  EXPECT_THROW(ConvexShape::polytope({}), std::invalid_argument);
  EXPECT_THROW(ConvexShape::box({0, 0, 0}, 0.0), std::invalid_argument);
}

TEST(Bounds, FlatSurfaceSphere) {
  const BernsteinSurface p = flat_unit_square();
  const ConvexShape s = ConvexShape::sphere({0.5, 0.5, 1.0}, 0.25);
  EXPECT_NEAR(upper_bound(p, s), std::sqrt(1.5) - 0.25, 1e-12);
  EXPECT_LE(lower_bound(p, s), 0.75 + 1e-12);
}

TEST(Bounds, BracketSampledMinimum) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const BernsteinSurface p = testing::random_surface(rng, 3, 3, 3);
    const Vector3d c(2.0, 0.5 * trial / 20.0, 0.0);
    const ConvexShape s = ConvexShape::sphere(c, 0.3);
    const double sampled = oracle::sampled_min(
        p, [&](const Vector3d& x) { return oracle::point_sphere(x, c, 0.3); }, 100, 100);
    EXPECT_LE(lower_bound(p, s), sampled + 1e-12);
    EXPECT_GE(upper_bound(p, s), sampled - 1e-12);
  }
}

TEST(MinDist, FlatSurfaceSphere) {
  const BernsteinSurface p = flat_unit_square();
  const ConvexShape s = ConvexShape::sphere({0.5, 0.5, 1.0}, 0.25);
  SeparationQuery q;
  q.surface = &p;
  q.obstacle = &s;
  q.epsilon = 1e-3;
  EXPECT_NEAR(min_dist(q).distance, 0.75, 1e-3);
}

TEST(MinDist, FarObstacleReturnsIncomingAlpha) {
  const BernsteinSurface p = flat_unit_square();
  const ConvexShape s = ConvexShape::sphere({0.5, 0.5, 10.0}, 0.25);
  SeparationQuery q;
  q.surface = &p;
  q.obstacle = &s;
  q.alpha = 1.0;
  const MinDistResult r = min_dist(q, true);
  EXPECT_EQ(r.distance, 1.0);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].exit, NodeExit::kPruned);
}

TEST(MinDist, CurvedSurfaceBoxMatchesSampling) {
  std::mt19937_64 rng(24);
  const BernsteinSurface p = testing::random_surface(rng, 3, 3, 3);
  const Vector3d c(0.0, 0.0, 2.0);
  const ConvexShape box = ConvexShape::box(c, 0.8);
  SeparationQuery q;
  q.surface = &p;
  q.obstacle = &box;
  const MinDistResult r = min_dist(q, true);
  const double sampled = oracle::sampled_min(
      p, [&](const Vector3d& x) { return oracle::point_box(x, c, 0.8); }, 200, 200);
  const double res = oracle::lattice_resolution(p, 200, 200);
  // The result is an on-surface distance within epsilon of the minimum.
  EXPECT_LE(r.distance, sampled + q.epsilon);
  EXPECT_GE(r.distance, sampled - res);
  for (const auto& node : r.trace) {
    EXPECT_LE(node.lower, node.upper + 1e-12);
    EXPECT_LE(r.distance, node.upper + 1e-12);
  }
  // The witness corner is on the surface and attains the distance.
  EXPECT_NEAR(gjk_distance(ConvexShape::point(Vector3d(p.evaluate(r.s, r.t))), box), r.distance,
              1e-12);
}

TEST(MinDist, RandomPairsMatchSamplingAndBoundEveryNode) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 3, n = 2 + (trial / 3) % 3;
    const BernsteinSurface p = testing::random_surface(rng, m, n, 3, {0.0, 0.6}, {0.0, 3.0});
    const Vector3d c(u(rng), u(rng), 1.6 + 0.5 * u(rng));
    const double size = 0.3 + 0.2 * u(rng);
    const bool sphere = trial % 2 == 0;
    const ConvexShape obstacle = sphere ? ConvexShape::sphere(c, size) : ConvexShape::box(c, size);
    auto dist = [&](const Vector3d& x) {
      return sphere ? oracle::point_sphere(x, c, size) : oracle::point_box(x, c, size);
    };
    SeparationQuery q;
    q.surface = &p;
    q.obstacle = &obstacle;
    q.epsilon = 1e-4;
    const MinDistResult r = min_dist(q, true);
    const double sampled = oracle::sampled_min(p, dist, 201, 201);
    const double res = oracle::lattice_resolution(p, 201, 201);
    EXPECT_LE(r.distance, sampled + q.epsilon) << "trial " << trial;
    EXPECT_GE(r.distance, sampled - res) << "trial " << trial;
    ASSERT_FALSE(r.trace.empty());
    for (const auto& node : r.trace) {
      // A node's lower bound never exceeds the distance of any point on its
      // own patch; the returned distance never exceeds any node's upper bound.
      const double patch = oracle::sampled_min(p, dist, 9, 9, &node.s_domain, &node.t_domain);
      EXPECT_LE(node.lower, patch + 1e-12) << "trial " << trial << " depth " << node.depth;
      EXPECT_LE(r.distance, node.upper + 1e-12) << "trial " << trial;
    }
  }
}

TEST(MinDist, ChildrenLowerBoundsDoNotDecrease) {
  std::mt19937_64 rng(25);
  const BernsteinSurface p = testing::random_surface(rng, 4, 4, 3);
  const ConvexShape s = ConvexShape::sphere({0.0, 0.0, 2.5}, 0.5);
  const double parent = lower_bound(p, s);
  const SurfaceSplit a = split_s(p, 0.5);
  EXPECT_GE(std::max(lower_bound(a.first, s), lower_bound(a.second, s)), parent - 1e-12);
}

TEST(MinDist, DepthLimitReportsBracket) {
  // Tangent contact away from every dyadic corner: lower is 0, upper is not.
  const BernsteinSurface p = flat_unit_square();
  const ConvexShape s = ConvexShape::sphere({0.37, 0.37, 0.1}, 0.1);
  SeparationQuery q;
  q.surface = &p;
  q.obstacle = &s;
  q.epsilon = 1e-12;
  q.max_depth = 2;
  try {
    min_dist(q);
    FAIL() << "expected MinDistDepthError";
  } catch (const MinDistDepthError& e) {
    EXPECT_LE(e.lower(), e.upper());
    EXPECT_EQ(e.lower(), 0.0);
  }
}

TEST(MinDist, RejectsBadQueries) {
  const BernsteinSurface p = flat_unit_square();
  const ConvexShape s = ConvexShape::sphere({0.5, 0.5, 1.0}, 0.25);
  SeparationQuery q;
  EXPECT_THROW(min_dist(q), std::invalid_argument);
  q.surface = &p;
  q.obstacle = &s;
  q.epsilon = 0.0;
  EXPECT_THROW(min_dist(q), std::invalid_argument);
}

TEST(Clearance, ResidualPerObstacle) {
  const BernsteinSurface p = flat_unit_square();
  EXPECT_TRUE(clearance_constraint(p, {}, 0.02, 1e-4).empty());
  // Sphere placed so that the flat surface sits exactly d_safe away.
  const double d_safe = 0.05;
  const auto r = clearance_constraint(
      p, {ConvexShape::sphere({0.5, 0.5, 0.25 + d_safe}, 0.25)}, d_safe, 1e-4);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0], 0.0, 1e-4);
  EXPECT_THROW(clearance_constraint(p, {}, 0.0, 1e-4), std::invalid_argument);
}

TEST(Witness, RefinementReachesInteriorMinimum) {
  const BernsteinSurface p = flat_unit_square();
  const ConvexShape s = ConvexShape::sphere({0.3, 0.6, 1.0}, 0.25);
  const SurfaceWitness w = refine_witness(p, s, 1.0, 1.0);
  EXPECT_NEAR(w.distance, 0.75, 1e-9);
  EXPECT_NEAR(w.s, 0.3, 1e-6);
  EXPECT_NEAR(w.t, 0.6, 1e-6);
  EXPECT_TRUE(w.normal.isApprox(Vector3d(0, 0, -1), 1e-9));
}

}  // namespace
}  // namespace rodplan
