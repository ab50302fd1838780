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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "rodplan/rod.h"
#include "test_util.h"

namespace rodplan {
namespace {

constexpr double kPi = std::numbers::pi;

// p(s, t) = [c t, 0, stretch * s] with zero angles.
PoseSurfaces line_pose(int m, int n, double L, double T, double c = 0.0, double stretch = 1.0) {
  Eigen::MatrixXd x(m + 1, n + 1), y = Eigen::MatrixXd::Zero(m + 1, n + 1), z(m + 1, n + 1);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= n; ++j) {
      x(i, j) = c * T * j / n;
      z(i, j) = stretch * L * i / m;
    }
  const Interval sd{0.0, L}, td{0.0, T};
  const auto zero = Eigen::MatrixXd::Zero(m + 1, n + 1);
  return PoseSurfaces{BernsteinSurface({x, y, z}, sd, td), BernsteinSurface({zero}, sd, td),
                      BernsteinSurface({zero}, sd, td), BernsteinSurface({zero}, sd, td)};
}

PoseSurfaces random_pose(std::mt19937_64& rng, int m, int n, double L, double T) {
  const Interval sd{0.0, L}, td{0.0, T};
  return PoseSurfaces{testing::random_surface(rng, m, n, 3, sd, td),
                      testing::random_surface(rng, m, n, 1, sd, td),
                      testing::random_surface(rng, m, n, 1, sd, td),
                      testing::random_surface(rng, m, n, 1, sd, td)};
}

FeasibilityBounds case1_bounds() {
  return {0.85, 1.15, 0.25, 2 * kPi, kPi / 4, 2.0, 0.075};
}

TEST(PoseSurfaces, ValidateRejectsMismatch) {
  PoseSurfaces pose = line_pose(3, 3, 1.0, 2.0);
  EXPECT_NO_THROW(pose.validate());
  pose.phi = BernsteinSurface::scalar(Eigen::MatrixXd::Zero(3, 4), 1.0, 2.0);
  EXPECT_THROW(pose.validate(), std::invalid_argument);
}

TEST(FeasibilityBounds, FirstInvalidField) {
  FeasibilityBounds b = case1_bounds();
  EXPECT_FALSE(b.first_invalid_field().has_value());
  b.v_min = 1.2;
  EXPECT_EQ(b.first_invalid_field().value(), "vmin");
  b = case1_bounds();
  b.q_t_max = 0.0;
  EXPECT_EQ(b.first_invalid_field().value(), "qtmax");
}

TEST(ConstraintSurfaces, StraightStaticRod) {
  const ConstraintSurfaces cs = constraint_surfaces(line_pose(4, 3, 0.6, 5.0), 6, 5);
  EXPECT_EQ(cs.base.v_sq.m(), 8);
  EXPECT_EQ(cs.base.v_sq.n(), 6);
  EXPECT_EQ(cs.elevated.v_sq.m(), 12);
  EXPECT_EQ(cs.elevated.v_sq.n(), 10);
  EXPECT_LE((cs.elevated.v_sq.component(0).array() - 1.0).abs().maxCoeff(), 1e-13);
  for (const auto* g : {&cs.elevated.q_sq, &cs.elevated.u_sq, &cs.elevated.w_sq,
                        &cs.elevated.a_sq, &cs.elevated.at_sq}) {
    EXPECT_LE(g->component(0).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(ConstraintSurfaces, RigidTranslation) {
  const ConstraintSurfaces cs = constraint_surfaces(line_pose(3, 3, 1.0, 2.0, 0.4), 3, 3);
  EXPECT_NEAR(cs.base.q_sq.value(0.3, 0.7), 0.16, 1e-13);
  EXPECT_NEAR(cs.base.v_sq.value(0.3, 0.7), 1.0, 1e-13);
  EXPECT_NEAR(cs.base.a_sq.value(0.3, 0.7), 0.0, 1e-13);
  EXPECT_NEAR(cs.base.at_sq.value(0.3, 0.7), 0.0, 1e-13);
}

TEST(ConstraintSurfaces, MatchFiniteDifferenceNorms) {
  std::mt19937_64 rng(31);
  const PoseSurfaces pose = random_pose(rng, 4, 4, 0.6, 3.0);
  const ConstraintSurfaces cs = constraint_surfaces(pose, 4, 4);
  auto P = [&](double s, double t) { return Eigen::Vector3d(pose.p.evaluate(s, t)); };
  auto A = [&](double s, double t) {
    return Eigen::Vector3d(pose.phi.value(s, t), pose.theta.value(s, t), pose.psi.value(s, t));
  };
  const double h = 1e-4;
  std::uniform_real_distribution<double> us(0.05, 0.55), ut(0.2, 2.8);
  for (int k = 0; k < 100; ++k) {
    const double s = us(rng), t = ut(rng);
    const Eigen::Vector3d ps = (P(s + h, t) - P(s - h, t)) / (2 * h);
    const Eigen::Vector3d pt = (P(s, t + h) - P(s, t - h)) / (2 * h);
    const Eigen::Vector3d pss = (P(s + h, t) - 2 * P(s, t) + P(s - h, t)) / (h * h);
    const Eigen::Vector3d ptt = (P(s, t + h) - 2 * P(s, t) + P(s, t - h)) / (h * h);
    const Eigen::Vector3d as = (A(s + h, t) - A(s - h, t)) / (2 * h);
    const Eigen::Vector3d at = (A(s, t + h) - A(s, t - h)) / (2 * h);
    auto rel = [](double got, double want) { return std::abs(got - want) / (1.0 + std::abs(want)); };
    EXPECT_LE(rel(cs.base.v_sq.value(s, t), ps.squaredNorm()), 1e-5);
    EXPECT_LE(rel(cs.base.q_sq.value(s, t), pt.squaredNorm()), 1e-5);
    EXPECT_LE(rel(cs.base.u_sq.value(s, t), as.squaredNorm()), 1e-5);
    EXPECT_LE(rel(cs.base.w_sq.value(s, t), at.squaredNorm()), 1e-5);
    EXPECT_LE(rel(cs.base.a_sq.value(s, t), pss.squaredNorm()), 1e-5);
    EXPECT_LE(rel(cs.base.at_sq.value(s, t), ptt.squaredNorm()), 1e-5);
  }
}

TEST(ConstraintSurfaces, RejectLowOrders) {
  EXPECT_THROW(constraint_surfaces(line_pose(1, 3, 1.0, 1.0), 2, 3), std::invalid_argument);
  EXPECT_THROW(constraint_surfaces(line_pose(3, 3, 1.0, 1.0), 2, 3), std::invalid_argument);
}

TEST(FeasibilityResiduals, StraightRodCase1Bounds) {
  const ConstraintSurfaces cs = constraint_surfaces(line_pose(5, 5, 0.6, 10.0), 10, 10);
  const std::vector<double> r = feasibility_residuals(cs, case1_bounds());
  EXPECT_EQ(r.size(), 7u * 21 * 21);
  EXPECT_GE(*std::min_element(r.begin(), r.end()), 0.0);
}

TEST(FeasibilityResiduals, StretchedRodFlagged) {
  const ConstraintSurfaces cs = constraint_surfaces(line_pose(3, 3, 1.0, 1.0, 0.0, 2.0), 3, 3);
  const std::vector<double> r = feasibility_residuals(cs, case1_bounds());
  const int per = 7 * 7;
  // Family order: v lower, v upper, ...
  for (int k = 0; k < per; ++k) EXPECT_NEAR(r[per + k], 1.3225 - 4.0, 1e-12);
}

TEST(FeasibilityResiduals, ElevationIsLessConservative) {
  std::mt19937_64 rng(32);
  const PoseSurfaces pose = random_pose(rng, 3, 3, 1.0, 1.0);
  const FeasibilityBounds b{0.1, 5.0, 5.0, 5.0, 5.0, 50.0, 50.0};
  double prev = -std::numeric_limits<double>::infinity();
  for (int e : {3, 6, 12}) {
    const auto r = feasibility_residuals(constraint_surfaces(pose, e, e), b);
    const double lo = *std::min_element(r.begin(), r.end());
    EXPECT_GE(lo, prev - 1e-12);
    prev = lo;
  }
}

TEST(Boundary, StraightStartControlPoints) {
  const BoundarySpec spec = straight_start(4, 0.6);
  for (int i = 0; i <= 4; ++i) {
    EXPECT_NEAR(spec.initial_position.control_points()(i, 2), 0.6 * i / 4, 1e-15);
  }
}

TEST(Boundary, SatisfiedAndViolated) {
  const BoundarySpec spec = straight_start(4, 0.6);
  PoseSurfaces pose = line_pose(4, 5, 0.6, 3.0);
  for (double r : boundary_residuals(pose, spec)) EXPECT_EQ(r, 0.0);
  auto comps = pose.p.components();
  comps[1](0, 3) += 0.01;
  pose.p = BernsteinSurface(comps, pose.p.s_domain(), pose.p.t_domain());
  int nonzero = 0;
  for (double r : boundary_residuals(pose, spec)) {
    if (r != 0.0) {
      ++nonzero;
      EXPECT_NEAR(std::abs(r), 0.01, 1e-15);
    }
  }
  EXPECT_EQ(nonzero, 1);
}

TEST(Boundary, OrderMismatchThrows) {
  EXPECT_THROW(boundary_residuals(line_pose(4, 4, 0.6, 1.0), straight_start(3, 0.6)),
               std::invalid_argument);
}

TEST(Rotation, IdentityAndQuarterTurn) {
  EXPECT_TRUE(euler_to_rotation(0, 0, 0).isApprox(Eigen::Matrix3d::Identity(), 1e-15));
  const Eigen::Vector3d y = euler_to_rotation(kPi / 2, 0, 0) * Eigen::Vector3d(0, 1, 0);
  EXPECT_TRUE(y.isApprox(Eigen::Vector3d(0, 0, 1), 1e-15));
}

TEST(Rotation, RandomAnglesOrthonormal) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Matrix3d R = euler_to_rotation(u(rng), u(rng), u(rng));
    EXPECT_LE((R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(R.determinant(), 1.0, 1e-12);
  }
}

TEST(Tip, StraightRodAndCorners) {
  const TipPose tip = tip_pose(line_pose(3, 3, 0.6, 2.0), 1.3);
  EXPECT_TRUE(tip.position.isApprox(Eigen::Vector3d(0, 0, 0.6), 1e-15));
  EXPECT_EQ(tip.angles.norm(), 0.0);
  std::mt19937_64 rng(34);
  const PoseSurfaces pose = random_pose(rng, 3, 4, 0.6, 2.0);
  const TipPose end = tip_pose(pose, 2.0);
  EXPECT_LE((end.position - pose.p.control_point(3, 4)).norm(), 1e-15);
  EXPECT_EQ(end.angles(0), pose.phi.component(0)(3, 4));
  EXPECT_THROW(tip_pose(pose, 2.5), std::domain_error);
}

}  // namespace
}  // namespace rodplan
