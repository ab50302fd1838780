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

#include "rodplan/bernstein.h"
#include "test_util.h"

namespace rodplan {
namespace {

using testing::naive_basis;
using testing::naive_eval;
using testing::random_grid;
using testing::random_surface;

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(0, 0), 1.0);
  EXPECT_EQ(binomial(5, 2), 10.0);
  EXPECT_EQ(binomial(10, 5), 252.0);
  EXPECT_EQ(binomial(20, 10), 184756.0);
}

TEST(BernsteinBasis, PartitionOfUnity) {
  for (int n = 0; n <= 12; ++n) {
    for (double u : {0.0, 0.13, 0.5, 0.77, 1.0}) {
      double sum = 0.0;
      for (int i = 0; i <= n; ++i) sum += bernstein_basis(n, i, u);
      EXPECT_NEAR(sum, 1.0, 1e-14) << "n=" << n << " u=" << u;
    }
  }
}

TEST(BernsteinBasis, MatchesDefinition) {
  for (int n = 1; n <= 10; ++n)
    for (int i = 0; i <= n; ++i)
      for (double u : {0.0, 0.3, 0.9, 1.0})
        EXPECT_NEAR(bernstein_basis(n, i, u), naive_basis(n, i, u), 1e-14);
}

TEST(DeCasteljau, MatchesExplicitSum) {
  std::mt19937_64 rng(3);
  for (int n = 0; n <= 9; ++n) {
    const Eigen::MatrixXd c = random_grid(rng, n + 1, 1);
    for (double u : {0.0, 0.21, 0.5, 0.99, 1.0}) {
      double expect = 0.0;
      for (int i = 0; i <= n; ++i) expect += c(i) * naive_basis(n, i, u);
      EXPECT_NEAR(de_casteljau({c.data(), std::size_t(n + 1)}, u), expect, 1e-13);
    }
  }
}

TEST(BernsteinSurface, MatchesExplicitSumOnScaledDomain) {
  std::mt19937_64 rng(4);
  const Interval sd{0.0, 0.6}, td{0.0, 7.5};
  const BernsteinSurface g = random_surface(rng, 4, 6, 1, sd, td);
  for (double s : {0.0, 0.11, 0.45, 0.6})
    for (double t : {0.0, 1.0, 3.3, 7.5})
      EXPECT_NEAR(g.value(s, t), naive_eval(g.component(0), sd, td, s, t), 1e-13);
}

TEST(BernsteinSurface, CornersInterpolateControlPoints) {
  std::mt19937_64 rng(5);
  const BernsteinSurface g = random_surface(rng, 5, 3, 3, {0.0, 2.0}, {1.0, 4.0});
  EXPECT_TRUE(g.evaluate(0.0, 1.0).isApprox(g.control_point(0, 0), 1e-15));
  EXPECT_TRUE(g.evaluate(2.0, 1.0).isApprox(g.control_point(5, 0), 1e-15));
  EXPECT_TRUE(g.evaluate(0.0, 4.0).isApprox(g.control_point(0, 3), 1e-15));
  EXPECT_TRUE(g.evaluate(2.0, 4.0).isApprox(g.control_point(5, 3), 1e-15));
}

TEST(BernsteinSurface, RejectsOutOfDomainAndBadInput) {
  std::mt19937_64 rng(6);
  const BernsteinSurface g = random_surface(rng, 2, 2, 1);
  EXPECT_THROW(g.evaluate(1.5, 0.5), std::domain_error);
  EXPECT_THROW(g.evaluate(0.5, -0.1), std::domain_error);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(BernsteinSurface::scalar(bad, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(BernsteinSurface::scalar(Eigen::MatrixXd::Zero(2, 2), 0.0, 1.0),
               std::invalid_argument);
}

TEST(BernsteinSurface, ConvexHullOfControlValues) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const BernsteinSurface g = random_surface(rng, 3 + trial % 4, 2 + trial % 5, 1);
    const double lo = g.component(0).minCoeff();
    const double hi = g.component(0).maxCoeff();
    for (int k = 0; k < 100; ++k) {
      const double v = g.value(u01(rng), u01(rng));
      EXPECT_GE(v, lo - 1e-12);
      EXPECT_LE(v, hi + 1e-12);
    }
  }
}

TEST(Elevation, PreservesValues) {
  std::mt19937_64 rng(8);
  const BernsteinSurface g = random_surface(rng, 3, 4, 2, {0.0, 0.6}, {0.0, 10.0});
  const BernsteinSurface e = elevate(g, 7, 9);
  EXPECT_EQ(e.m(), 7);
  EXPECT_EQ(e.n(), 9);
  for (double s : {0.0, 0.2, 0.6})
    for (double t : {0.0, 4.0, 10.0})
      EXPECT_LE((g.evaluate(s, t) - e.evaluate(s, t)).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_THROW(elevate(g, 2, 9), std::invalid_argument);
}

TEST(Elevation, MatrixRowsSumToOne) {
  const Eigen::MatrixXd& e = elevation_matrix(4, 9);
  ASSERT_EQ(e.rows(), 5);
  ASSERT_EQ(e.cols(), 10);
  // Elevating the all-ones polynomial keeps it all ones.
  EXPECT_LE((e.transpose() * Eigen::VectorXd::Ones(5) - Eigen::VectorXd::Ones(10))
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
}

TEST(Product, MatchesPointwiseProduct) {
  std::mt19937_64 rng(9);
  const BernsteinSurface g = random_surface(rng, 3, 2, 1, {0.0, 0.6}, {0.0, 5.0});
  const BernsteinSurface h = random_surface(rng, 2, 4, 1, {0.0, 0.6}, {0.0, 5.0});
  const BernsteinSurface gh = multiply(g, h);
  EXPECT_EQ(gh.m(), 5);
  EXPECT_EQ(gh.n(), 6);
  for (double s : {0.0, 0.17, 0.5, 0.6})
    for (double t : {0.0, 1.9, 5.0})
      EXPECT_NEAR(gh.value(s, t), g.value(s, t) * h.value(s, t), 1e-12);
}

TEST(Product, DotMatchesPointwise) {
  std::mt19937_64 rng(10);
  const BernsteinSurface g = random_surface(rng, 3, 3, 3);
  const BernsteinSurface h = random_surface(rng, 2, 3, 3);
  const BernsteinSurface d = dot(g, h);
  for (double s : {0.0, 0.4, 1.0})
    for (double t : {0.0, 0.7, 1.0})
      EXPECT_NEAR(d.value(s, t), g.evaluate(s, t).dot(h.evaluate(s, t)), 1e-12);
}

TEST(Product, AdjointMatchesFiniteDifference) {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd g = random_grid(rng, 4, 3);
  const Eigen::MatrixXd h = random_grid(rng, 3, 5);
  const Eigen::MatrixXd H = random_grid(rng, 6, 7);
  const Eigen::MatrixXd adj = product_coefficients_adjoint(H, h, 4, 3);
  // The product is linear in g, so a unit perturbation is exact.
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(4, 3);
      e(i, j) = 1.0;
      const double expect = (H.array() * product_coefficients(e, h).array()).sum();
      EXPECT_NEAR(adj(i, j), expect, 1e-12);
    }
  }
}

TEST(Derivative, MatchesCentralDifferences) {
  std::mt19937_64 rng(12);
  const BernsteinSurface g = random_surface(rng, 5, 4, 1, {0.0, 0.6}, {0.0, 10.0});
  const BernsteinSurface gs = partial_s(g);
  const BernsteinSurface gt = partial_t(g);
  EXPECT_EQ(gs.m(), 4);
  EXPECT_EQ(gt.n(), 3);
  const double h = 1e-6;
  for (double s : {0.1, 0.3, 0.5})
    for (double t : {1.0, 5.0, 9.0}) {
      const double fs = (g.value(s + h, t) - g.value(s - h, t)) / (2 * h);
      const double ft = (g.value(s, t + h) - g.value(s, t - h)) / (2 * h);
      EXPECT_NEAR(gs.value(s, t), fs, 1e-6 * (1.0 + std::abs(fs)));
      EXPECT_NEAR(gt.value(s, t), ft, 1e-6 * (1.0 + std::abs(ft)));
    }
}

TEST(Derivative, OrderZeroDirectionThrows) {
  const BernsteinSurface g =
      BernsteinSurface::constant(0, 3, 1, 2.0, {0.0, 1.0}, {0.0, 1.0});
  EXPECT_THROW(partial_s(g), std::invalid_argument);
  EXPECT_NO_THROW(partial_t(g));
}

TEST(Derivative, DifferentiationMatrixScale) {
  const DiffMatrix d = differentiation_matrix(4, 2.0);
  const Eigen::MatrixXd D = d.matrix();
  ASSERT_EQ(D.rows(), 5);
  ASSERT_EQ(D.cols(), 4);
  EXPECT_DOUBLE_EQ(D(0, 0), -2.0);
  EXPECT_DOUBLE_EQ(D(1, 0), 2.0);
  EXPECT_THROW(differentiation_matrix(0, 1.0), std::invalid_argument);
}

TEST(Split, PiecesReproduceSurface) {
  std::mt19937_64 rng(13);
  const BernsteinSurface g = random_surface(rng, 4, 3, 2, {0.0, 0.6}, {0.0, 8.0});
  const SurfaceSplit a = split_s(g, 0.25);
  const SurfaceSplit b = split_t(g, 3.0);
  EXPECT_EQ(a.first.s_domain(), (Interval{0.0, 0.25}));
  EXPECT_EQ(b.second.t_domain(), (Interval{3.0, 8.0}));
  for (double t : {0.0, 2.0, 8.0}) {
    EXPECT_LE((a.first.evaluate(0.1, t) - g.evaluate(0.1, t)).norm(), 1e-13);
    EXPECT_LE((a.second.evaluate(0.5, t) - g.evaluate(0.5, t)).norm(), 1e-13);
  }
  for (double s : {0.0, 0.3, 0.6}) {
    EXPECT_LE((b.first.evaluate(s, 1.0) - g.evaluate(s, 1.0)).norm(), 1e-13);
    EXPECT_LE((b.second.evaluate(s, 6.5) - g.evaluate(s, 6.5)).norm(), 1e-13);
  }
}

TEST(Edge, ExtractsBoundaryCurves) {
  std::mt19937_64 rng(14);
  const BernsteinSurface g = random_surface(rng, 3, 4, 3, {0.0, 0.6}, {0.0, 2.0});
  const BernsteinPolynomial top = edge(g, Edge::kTEnd);
  const BernsteinPolynomial base = edge(g, Edge::kSStart);
  EXPECT_EQ(top.order(), 3);
  EXPECT_EQ(base.order(), 4);
  EXPECT_LE((top.evaluate(0.35) - g.evaluate(0.35, 2.0)).norm(), 1e-13);
  EXPECT_LE((base.evaluate(1.2) - g.evaluate(0.0, 1.2)).norm(), 1e-13);
}

TEST(Arithmetic, AddSubtractScale) {
  std::mt19937_64 rng(15);
  const BernsteinSurface g = random_surface(rng, 2, 2, 1);
  const BernsteinSurface h = random_surface(rng, 2, 2, 1);
  EXPECT_NEAR(add(g, h).value(0.3, 0.6), g.value(0.3, 0.6) + h.value(0.3, 0.6), 1e-14);
  EXPECT_NEAR(subtract(g, h).value(0.3, 0.6), g.value(0.3, 0.6) - h.value(0.3, 0.6), 1e-14);
  EXPECT_NEAR(scale(g, -2.5).value(0.3, 0.6), -2.5 * g.value(0.3, 0.6), 1e-14);
  const BernsteinSurface k = random_surface(rng, 3, 2, 1);
  EXPECT_THROW(add(g, k), std::invalid_argument);
}

}  // namespace
}  // namespace rodplan
