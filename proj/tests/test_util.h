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


#ifndef RODPLAN_TESTS_TEST_UTIL_H_
#define RODPLAN_TESTS_TEST_UTIL_H_

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rodplan/bernstein.h"

namespace rodplan::testing {

inline Eigen::MatrixXd random_grid(std::mt19937_64& rng, int rows, int cols, double lo = -1.0,
                                   double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = u(rng);
  return g;
}

inline BernsteinSurface random_surface(std::mt19937_64& rng, int m, int n, int dim,
                                       Interval sd = {0.0, 1.0}, Interval td = {0.0, 1.0}) {
  std::vector<Eigen::MatrixXd> comps;
  for (int k = 0; k < dim; ++k) comps.push_back(random_grid(rng, m + 1, n + 1));
  return BernsteinSurface(std::move(comps), sd, td);
}

// Direct double sum with binomials computed by multiplication; shares no
// code with the library.
inline double naive_binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double naive_basis(int n, int i, double u) {
  return naive_binomial(n, i) * std::pow(u, i) * std::pow(1.0 - u, n - i);
}

inline double naive_eval(const Eigen::MatrixXd& c, const Interval& sd, const Interval& td,
                         double s, double t) {
  const int m = static_cast<int>(c.rows()) - 1;
  const int n = static_cast<int>(c.cols()) - 1;
  const double u = (s - sd.lo) / sd.length();
  const double w = (t - td.lo) / td.length();
  double sum = 0.0;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= n; ++j) sum += c(i, j) * naive_basis(m, i, u) * naive_basis(n, j, w);
  return sum;
}

}  // namespace rodplan::testing

#endif  // RODPLAN_TESTS_TEST_UTIL_H_
