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


#ifndef RODPLAN_TOOLS_SCENARIO_H_
#define RODPLAN_TOOLS_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "rodplan/geometry.h"
#include "rodplan/nlp.h"
#include "rodplan/rod.h"
#include "rodplan/transcription.h"
#include "rodplan/validation.h"

namespace rodplan::cli {

inline constexpr int kSpecVersion = 1;

// A scenario or artifact file that does not match the schema. `field` is a
// JSON path such as "bounds.vmin".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ObstacleSpec {
  enum class Type { kSphere, kBox, kPolytope };
  Type type = Type::kSphere;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.0;  // sphere
  double edge = 0.0;    // box
  std::vector<Eigen::Vector3d> vertices;  // polytope

  ConvexShape shape() const;
};

// Either a straight rod or explicit s-polynomials of any order <= m; the
// latter are degree-elevated to m.
struct InitialConfiguration {
  bool straight = true;
  Eigen::MatrixXd p;  // rows = control points, 3 columns
  Eigen::VectorXd phi;
  Eigen::VectorXd theta;
  Eigen::VectorXd psi;
};

struct ScenarioSolver {
  double tol_eq = 1e-6;
  double tol_ineq = 1e-6;
  int max_iter = 500;
  double T_min = 0.1;
  double T_max = 60.0;
  double wT = 0.0;
  std::uint64_t seed = 0;
};

struct ScenarioVerification {
  double feasibility_tol = 1e-6;
  double clearance_slack = 1e-3;
  double boundary_tol = 1e-6;
  std::optional<double> tip_tol;
};

struct ScenarioSpec {
  std::string name;
  double L = 0.6;
  int m = 5;
  int n = 5;
  int m_e = 10;
  int n_e = 10;
  FeasibilityBounds bounds;
  double d_safe = 0.02;
  double epsilon = 1e-4;
  Eigen::Vector3d p_des = Eigen::Vector3d::Zero();
  double phi_des = 0.0;
  double theta_des = 0.0;
  double psi_des = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  double w3 = 0.0;
  double w4 = 0.0;
  std::vector<ObstacleSpec> obstacles;
  InitialConfiguration initial;
  ScenarioSolver solver;
  ScenarioVerification verification;

  // Same scenario at other orders; elevated orders keep their ratio.
  ScenarioSpec with_orders(int m_new, int n_new) const;
};

ScenarioSpec parse_scenario(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioSpec& spec);

// Throws SchemaError naming the field when the initial configuration has a
// higher order than m.
BoundarySpec boundary_spec(const ScenarioSpec& spec);
TranscriptionConfig transcription_config(const ScenarioSpec& spec);
SolverOptions solver_options(const ScenarioSpec& spec);
VerificationSpec verification_spec(const ScenarioSpec& spec);

}  // namespace rodplan::cli

#endif  // RODPLAN_TOOLS_SCENARIO_H_
