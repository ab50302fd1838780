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


#include "scenario.h"

#include <cmath>
#include <set>

namespace rodplan::cli {
namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(join(path, key), "missing field");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SchemaError(path, "expected a finite number");
  return x;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<int>();
}

double number(const json& obj, const std::string& path, const std::string& key) {
  return as_number(require(obj, path, key), join(path, key));
}

double number_or(const json& obj, const std::string& path, const std::string& key,
                 double fallback) {
  return obj.contains(key) ? number(obj, path, key) : fallback;
}

Eigen::Vector3d vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw SchemaError(path, "expected [x, y, z]");
  return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]"),
          as_number(v[2], path + "[2]")};
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) throw SchemaError(join(path, it.key()), "unknown field");
  }
}

Eigen::VectorXd scalar_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw SchemaError(path, "expected a nonempty array");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(i) = as_number(v[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

ObstacleSpec parse_obstacle(const json& j, const std::string& path) {
  ObstacleSpec o;
  const json& type = require(j, path, "type");
  if (!type.is_string()) throw SchemaError(join(path, "type"), "expected a string");
  const std::string t = type.get<std::string>();
  if (t == "sphere") {
    reject_unknown(j, path, {"type", "center", "radius"});
    o.type = ObstacleSpec::Type::kSphere;
    o.center = vec3(require(j, path, "center"), join(path, "center"));
    o.radius = number(j, path, "radius");
    if (!(o.radius > 0.0)) throw SchemaError(join(path, "radius"), "must be > 0");
  } else if (t == "box") {
    reject_unknown(j, path, {"type", "center", "edge"});
    o.type = ObstacleSpec::Type::kBox;
    o.center = vec3(require(j, path, "center"), join(path, "center"));
    o.edge = number(j, path, "edge");
    if (!(o.edge > 0.0)) throw SchemaError(join(path, "edge"), "must be > 0");
  } else if (t == "polytope") {
    reject_unknown(j, path, {"type", "vertices"});
    o.type = ObstacleSpec::Type::kPolytope;
    const json& vs = require(j, path, "vertices");
    const std::string vpath = join(path, "vertices");
    if (!vs.is_array() || vs.empty()) throw SchemaError(vpath, "expected a nonempty array");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      o.vertices.push_back(vec3(vs[i], vpath + "[" + std::to_string(i) + "]"));
    }
  } else {
    throw SchemaError(join(path, "type"), "expected sphere, box or polytope");
  }
  return o;
}

InitialConfiguration parse_initial(const json& j, const std::string& path) {
  InitialConfiguration init;
  const json& type = require(j, path, "type");
  if (type == "straight") {
    reject_unknown(j, path, {"type"});
    return init;
  }
  if (type != "control_points") {
    throw SchemaError(join(path, "type"), "expected straight or control_points");
  }
  reject_unknown(j, path, {"type", "p", "phi", "theta", "psi"});
  init.straight = false;
  const json& p = require(j, path, "p");
  const std::string ppath = join(path, "p");
  if (!p.is_array() || p.empty()) throw SchemaError(ppath, "expected a nonempty array");
  init.p.resize(p.size(), 3);
  for (std::size_t i = 0; i < p.size(); ++i) {
    init.p.row(i) = vec3(p[i], ppath + "[" + std::to_string(i) + "]").transpose();
  }
  init.phi = scalar_list(require(j, path, "phi"), join(path, "phi"));
  init.theta = scalar_list(require(j, path, "theta"), join(path, "theta"));
  init.psi = scalar_list(require(j, path, "psi"), join(path, "psi"));
  return init;
}

json vec_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json list_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

void check_orders(const ScenarioSpec& s) {
  if (s.m < 2) throw SchemaError("m", "must be >= 2");
  if (s.n < 2) throw SchemaError("n", "must be >= 2");
  if (s.m_e < s.m) throw SchemaError("m_e", "must be >= m");
  if (s.n_e < s.n) throw SchemaError("n_e", "must be >= n");
}

// Elevates polynomial coefficients (rows) from their order to m.
Eigen::MatrixXd elevate_rows(const Eigen::MatrixXd& cps, int m, const std::string& path) {
  const int k = static_cast<int>(cps.rows()) - 1;
  if (k > m) throw SchemaError(path, "order exceeds m");
  return elevation_matrix(k, m).transpose() * cps;
}

}  // namespace

SchemaError::SchemaError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

ConvexShape ObstacleSpec::shape() const {
  switch (type) {
    case Type::kSphere: return ConvexShape::sphere(center, radius);
    case Type::kBox: return ConvexShape::box(center, edge);
    case Type::kPolytope: return ConvexShape::polytope(vertices);
  }
  throw std::logic_error("unknown obstacle type");
}

ScenarioSpec ScenarioSpec::with_orders(int m_new, int n_new) const {
  ScenarioSpec out = *this;
  out.m = m_new;
  out.n = n_new;
  out.m_e = static_cast<int>(std::lround(static_cast<double>(m_e) * m_new / m));
  out.n_e = static_cast<int>(std::lround(static_cast<double>(n_e) * n_new / n));
  return out;
}

ScenarioSpec parse_scenario(const json& j) {
  if (!j.is_object()) throw SchemaError("", "scenario must be a JSON object");
  reject_unknown(j, "",
                 {"spec_version", "name", "notes", "L", "m", "n", "m_e", "n_e", "bounds",
                  "d_safe", "epsilon", "p_des", "phi_des", "theta_des", "psi_des", "weights",
                  "obstacles", "initial_configuration", "solver", "verification"});
  const json& version = require(j, "", "spec_version");
  if (!version.is_number_integer() || version.get<int>() != kSpecVersion) {
    throw SchemaError("spec_version", "expected 1");
  }
  ScenarioSpec s;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw SchemaError("name", "expected a string");
    s.name = j["name"].get<std::string>();
  }
  if (j.contains("notes") && !j["notes"].is_string()) {
    throw SchemaError("notes", "expected a string");
  }
  s.L = number(j, "", "L");
  if (!(s.L > 0.0)) throw SchemaError("L", "must be > 0");
  s.m = as_int(require(j, "", "m"), "m");
  s.n = as_int(require(j, "", "n"), "n");
  s.m_e = j.contains("m_e") ? as_int(j["m_e"], "m_e") : 2 * s.m;
  s.n_e = j.contains("n_e") ? as_int(j["n_e"], "n_e") : 2 * s.n;
  check_orders(s);

  const json& b = require(j, "", "bounds");
  reject_unknown(b, "bounds", {"vmin", "vmax", "qmax", "umax", "wmax", "vsmax", "qtmax"});
  s.bounds.v_min = number(b, "bounds", "vmin");
  s.bounds.v_max = number(b, "bounds", "vmax");
  s.bounds.q_max = number(b, "bounds", "qmax");
  s.bounds.u_max = number(b, "bounds", "umax");
  s.bounds.omega_max = number(b, "bounds", "wmax");
  s.bounds.v_s_max = number(b, "bounds", "vsmax");
  s.bounds.q_t_max = number(b, "bounds", "qtmax");
  if (auto bad = s.bounds.first_invalid_field()) {
    throw SchemaError("bounds." + *bad, "inconsistent or non-positive bound");
  }

  s.d_safe = number_or(j, "", "d_safe", s.d_safe);
  if (!(s.d_safe > 0.0)) throw SchemaError("d_safe", "must be > 0");
  s.epsilon = number_or(j, "", "epsilon", s.epsilon);
  if (!(s.epsilon > 0.0)) throw SchemaError("epsilon", "must be > 0");

  s.p_des = vec3(require(j, "", "p_des"), "p_des");
  s.phi_des = number(j, "", "phi_des");
  s.theta_des = number(j, "", "theta_des");
  s.psi_des = number(j, "", "psi_des");

  const json& w = require(j, "", "weights");
  reject_unknown(w, "weights", {"w1", "w2", "w3", "w4"});
  s.w1 = number(w, "weights", "w1");
  s.w2 = number(w, "weights", "w2");
  s.w3 = number(w, "weights", "w3");
  s.w4 = number(w, "weights", "w4");
  for (auto [name, value] : {std::pair{"w1", s.w1}, {"w2", s.w2}, {"w3", s.w3}, {"w4", s.w4}}) {
    if (value < 0.0) throw SchemaError(std::string("weights.") + name, "must be >= 0");
  }

  if (j.contains("obstacles")) {
    const json& obs = j["obstacles"];
    if (!obs.is_array()) throw SchemaError("obstacles", "expected an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      s.obstacles.push_back(parse_obstacle(obs[i], "obstacles[" + std::to_string(i) + "]"));
    }
  }

  s.initial = parse_initial(require(j, "", "initial_configuration"), "initial_configuration");

  if (j.contains("solver")) {
    const json& o = j["solver"];
    reject_unknown(o, "solver",
                   {"tol_eq", "tol_ineq", "max_iter", "T_min", "T_max", "wT", "seed"});
    ScenarioSolver& sv = s.solver;
    sv.tol_eq = number_or(o, "solver", "tol_eq", sv.tol_eq);
    sv.tol_ineq = number_or(o, "solver", "tol_ineq", sv.tol_ineq);
    if (o.contains("max_iter")) sv.max_iter = as_int(o["max_iter"], "solver.max_iter");
    sv.T_min = number_or(o, "solver", "T_min", sv.T_min);
    sv.T_max = number_or(o, "solver", "T_max", sv.T_max);
    sv.wT = number_or(o, "solver", "wT", sv.wT);
    if (o.contains("seed")) {
      if (!o["seed"].is_number_unsigned()) throw SchemaError("solver.seed", "expected an unsigned integer");
      sv.seed = o["seed"].get<std::uint64_t>();
    }
    if (!(sv.tol_eq > 0.0)) throw SchemaError("solver.tol_eq", "must be > 0");
    if (!(sv.tol_ineq > 0.0)) throw SchemaError("solver.tol_ineq", "must be > 0");
    if (sv.max_iter < 1) throw SchemaError("solver.max_iter", "must be >= 1");
    if (!(sv.T_min > 0.0)) throw SchemaError("solver.T_min", "must be > 0");
    if (!(sv.T_max >= sv.T_min)) throw SchemaError("solver.T_max", "must be >= T_min");
    if (sv.wT < 0.0) throw SchemaError("solver.wT", "must be >= 0");
  }

  if (j.contains("verification")) {
    const json& v = j["verification"];
    reject_unknown(v, "verification",
                   {"feasibility_tol", "clearance_slack", "boundary_tol", "tip_tol"});
    ScenarioVerification& sv = s.verification;
    sv.feasibility_tol = number_or(v, "verification", "feasibility_tol", sv.feasibility_tol);
    sv.clearance_slack = number_or(v, "verification", "clearance_slack", sv.clearance_slack);
    sv.boundary_tol = number_or(v, "verification", "boundary_tol", sv.boundary_tol);
    if (v.contains("tip_tol") && !v["tip_tol"].is_null()) {
      sv.tip_tol = number(v, "verification", "tip_tol");
    }
  }
  // Surface orders of the initial polynomials are checked here rather than
  // at plan time so that plan fails with a schema error.
  boundary_spec(s);
  return s;
}

json to_json(const ScenarioSpec& s) {
  json j;
  j["spec_version"] = kSpecVersion;
  j["name"] = s.name;
  j["L"] = s.L;
  j["m"] = s.m;
  j["n"] = s.n;
  j["m_e"] = s.m_e;
  j["n_e"] = s.n_e;
  j["bounds"] = {{"vmin", s.bounds.v_min},     {"vmax", s.bounds.v_max},
                 {"qmax", s.bounds.q_max},     {"umax", s.bounds.u_max},
                 {"wmax", s.bounds.omega_max}, {"vsmax", s.bounds.v_s_max},
                 {"qtmax", s.bounds.q_t_max}};
  j["d_safe"] = s.d_safe;
  j["epsilon"] = s.epsilon;
  j["p_des"] = vec_json(s.p_des);
  j["phi_des"] = s.phi_des;
  j["theta_des"] = s.theta_des;
  j["psi_des"] = s.psi_des;
  j["weights"] = {{"w1", s.w1}, {"w2", s.w2}, {"w3", s.w3}, {"w4", s.w4}};
  j["obstacles"] = json::array();
  for (const auto& o : s.obstacles) {
    switch (o.type) {
      case ObstacleSpec::Type::kSphere:
        j["obstacles"].push_back(
            {{"type", "sphere"}, {"center", vec_json(o.center)}, {"radius", o.radius}});
        break;
      case ObstacleSpec::Type::kBox:
        j["obstacles"].push_back(
            {{"type", "box"}, {"center", vec_json(o.center)}, {"edge", o.edge}});
        break;
      case ObstacleSpec::Type::kPolytope: {
        json vs = json::array();
        for (const auto& v : o.vertices) vs.push_back(vec_json(v));
        j["obstacles"].push_back({{"type", "polytope"}, {"vertices", vs}});
        break;
      }
    }
  }
  if (s.initial.straight) {
    j["initial_configuration"] = {{"type", "straight"}};
  } else {
    json p = json::array();
    for (Eigen::Index i = 0; i < s.initial.p.rows(); ++i) {
      p.push_back(vec_json(s.initial.p.row(i).transpose()));
    }
    j["initial_configuration"] = {{"type", "control_points"},
                                  {"p", p},
                                  {"phi", list_json(s.initial.phi)},
                                  {"theta", list_json(s.initial.theta)},
                                  {"psi", list_json(s.initial.psi)}};
  }
  j["solver"] = {{"tol_eq", s.solver.tol_eq}, {"tol_ineq", s.solver.tol_ineq},
                 {"max_iter", s.solver.max_iter}, {"T_min", s.solver.T_min},
                 {"T_max", s.solver.T_max}, {"wT", s.solver.wT},
                 {"seed", s.solver.seed}};
  j["verification"] = {{"feasibility_tol", s.verification.feasibility_tol},
                       {"clearance_slack", s.verification.clearance_slack},
                       {"boundary_tol", s.verification.boundary_tol},
                       {"tip_tol", s.verification.tip_tol ? json(*s.verification.tip_tol)
                                                          : json(nullptr)}};
  return j;
}

BoundarySpec boundary_spec(const ScenarioSpec& s) {
  check_orders(s);
  if (s.initial.straight) return straight_start(s.m, s.L);
  const std::string path = "initial_configuration";
  Eigen::MatrixXd angles(s.m + 1, 3);
  angles.col(0) = elevate_rows(s.initial.phi, s.m, path + ".phi");
  angles.col(1) = elevate_rows(s.initial.theta, s.m, path + ".theta");
  angles.col(2) = elevate_rows(s.initial.psi, s.m, path + ".psi");
  const Interval domain{0.0, s.L};
  return BoundarySpec{BernsteinPolynomial(elevate_rows(s.initial.p, s.m, path + ".p"), domain),
                      BernsteinPolynomial(angles, domain), true, true, std::nullopt};
}

TranscriptionConfig transcription_config(const ScenarioSpec& s) {
  TranscriptionConfig c;
  c.L = s.L;
  c.m = s.m;
  c.n = s.n;
  c.m_e = s.m_e;
  c.n_e = s.n_e;
  c.bounds = s.bounds;
  c.boundary = boundary_spec(s);
  c.cost.w1 = s.w1;
  c.cost.w2 = s.w2;
  c.cost.w3 = s.w3;
  c.cost.w4 = s.w4;
  c.cost.p_des = s.p_des;
  c.cost.phi_des = s.phi_des;
  c.cost.theta_des = s.theta_des;
  c.cost.psi_des = s.psi_des;
  c.cost.w_time = s.solver.wT;
  for (const auto& o : s.obstacles) c.obstacles.push_back(o.shape());
  c.d_safe = s.d_safe;
  c.epsilon = s.epsilon;
  c.T_min = s.solver.T_min;
  c.T_max = s.solver.T_max;
  return c;
}

SolverOptions solver_options(const ScenarioSpec& s) {
  SolverOptions o;
  o.tol_eq = s.solver.tol_eq;
  o.tol_ineq = s.solver.tol_ineq;
  o.max_iter = s.solver.max_iter;
  o.seed = s.solver.seed;
  return o;
}

VerificationSpec verification_spec(const ScenarioSpec& s) {
  VerificationSpec v;
  v.bounds = s.bounds;
  v.boundary = boundary_spec(s);
  for (const auto& o : s.obstacles) v.obstacles.push_back(o.shape());
  v.d_safe = s.d_safe;
  v.p_des = s.p_des;
  v.angles_des = Eigen::Vector3d(s.phi_des, s.theta_des, s.psi_des);
  v.feasibility_tol = s.verification.feasibility_tol;
  v.clearance_slack = s.verification.clearance_slack;
  v.boundary_tol = s.verification.boundary_tol;
  v.tip_tol = s.verification.tip_tol;
  return v;
}

}  // namespace rodplan::cli
