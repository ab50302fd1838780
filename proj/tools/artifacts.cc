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


#include "artifacts.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "scenario.h"

namespace rodplan::cli {
namespace {

using nlohmann::json;

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

int required_int(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw SchemaError(path + "." + key, "expected an integer");
  }
  return j[key].get<int>();
}

double required_number(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw SchemaError(path + "." + key, "expected a number");
  }
  return j[key].get<double>();
}

std::vector<double> time_samples(const SamplingGrid& grid, const Interval& td) {
  std::vector<double> ts = grid.t_samples(td);
  for (double sec = std::ceil(td.lo); sec <= td.hi; sec += 1.0) ts.push_back(sec);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(),
                       [&](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + td.hi); }),
           ts.end());
  return ts;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

json read_json(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", path.string() + " is not valid JSON: " + e.what());
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("error writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

json surface_to_json(const BernsteinSurface& g) {
  json cps = json::array();
  for (int i = 0; i <= g.m(); ++i) {
    json row = json::array();
    for (int j = 0; j <= g.n(); ++j) {
      json pt = json::array();
      for (int k = 0; k < g.dim(); ++k) pt.push_back(g.component(k)(i, j));
      row.push_back(pt);
    }
    cps.push_back(row);
  }
  return {{"m", g.m()},
          {"n", g.n()},
          {"L", g.s_domain().length()},
          {"T", g.t_domain().length()},
          {"d", g.dim()},
          {"cps", cps}};
}

BernsteinSurface surface_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected a surface object");
  const int m = required_int(j, path, "m");
  const int n = required_int(j, path, "n");
  const int d = required_int(j, path, "d");
  const double L = required_number(j, path, "L");
  const double T = required_number(j, path, "T");
  if (m < 0 || n < 0 || d < 1) throw SchemaError(path, "bad orders or dimension");
  if (!(L > 0.0) || !(T > 0.0)) throw SchemaError(path, "L and T must be > 0");
  const std::string cpath = path + ".cps";
  if (!j.contains("cps") || !j["cps"].is_array() || j["cps"].size() != std::size_t(m + 1)) {
    throw SchemaError(cpath, "expected m+1 rows");
  }
  std::vector<Eigen::MatrixXd> comps(d, Eigen::MatrixXd(m + 1, n + 1));
  for (int i = 0; i <= m; ++i) {
    const json& row = j["cps"][i];
    if (!row.is_array() || row.size() != std::size_t(n + 1)) {
      throw SchemaError(cpath, "expected n+1 entries per row");
    }
    for (int jj = 0; jj <= n; ++jj) {
      const json& pt = row[jj];
      if (!pt.is_array() || pt.size() != std::size_t(d)) {
        throw SchemaError(cpath, "expected d coordinates per control point");
      }
      for (int k = 0; k < d; ++k) {
        if (!pt[k].is_number()) throw SchemaError(cpath, "expected numbers");
        comps[k](i, jj) = pt[k].get<double>();
      }
    }
  }
  try {
    return BernsteinSurface(std::move(comps), Interval{0.0, L}, Interval{0.0, T});
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
}

json solver_report_to_json(const SolverReport& r) {
  return {{"status", to_string(r.status)},
          {"cost", r.cost},
          {"max_equality_violation", r.max_equality_violation},
          {"min_inequality_residual", finite_or_null(r.min_inequality_residual)},
          {"iterations", r.iterations},
          {"inner_iterations", r.inner_iterations},
          {"wall_time", r.wall_time}};
}

SolverReport solver_report_from_json(const json& j) {
  const std::string path = "solver";
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  SolverReport r;
  if (!j.contains("status") || !j["status"].is_string()) {
    throw SchemaError(path + ".status", "expected a string");
  }
  const std::string status = j["status"].get<std::string>();
  bool known = false;
  for (SolverStatus s : {SolverStatus::kOptimal, SolverStatus::kFeasibleStalled,
                         SolverStatus::kInfeasible, SolverStatus::kIterationLimit}) {
    if (to_string(s) == status) {
      r.status = s;
      known = true;
    }
  }
  if (!known) throw SchemaError(path + ".status", "unknown status");
  r.cost = required_number(j, path, "cost");
  r.max_equality_violation = required_number(j, path, "max_equality_violation");
  r.min_inequality_residual = j.contains("min_inequality_residual") &&
                                      j["min_inequality_residual"].is_null()
                                  ? std::numeric_limits<double>::infinity()
                                  : required_number(j, path, "min_inequality_residual");
  r.iterations = required_int(j, path, "iterations");
  r.inner_iterations = required_int(j, path, "inner_iterations");
  r.wall_time = required_number(j, path, "wall_time");
  return r;
}

json verification_to_json(const VerificationReport& r) {
  json feas = json::object();
  for (int k = 0; k < kFeasibilityFamilies; ++k) {
    feas[kFamilyNames[k]] = {{"worst", r.feasibility.worst[k]},
                             {"s", r.feasibility.where[k](0)},
                             {"t", r.feasibility.where[k](1)}};
  }
  json clearance = json::array();
  for (std::size_t o = 0; o < r.clearance.size(); ++o) {
    clearance.push_back({{"obstacle", o},
                         {"min_distance", r.clearance[o].min_distance},
                         {"required", r.clearance[o].required},
                         {"pass", r.clearance[o].pass}});
  }
  const BoundaryMismatch& b = r.boundary;
  return {{"verdict", r.pass() ? "pass" : "fail"},
          {"failures", r.failures},
          {"grid", {r.grid.n_s, r.grid.n_t}},
          {"feasibility", feas},
          {"max_violation", r.feasibility.max_violation()},
          {"clearance", clearance},
          {"boundary",
           {{"initial_position", b.initial_position},
            {"initial_angles", b.initial_angles},
            {"rest_start", b.rest_start},
            {"base_position", b.base_position},
            {"base_angles", b.base_angles},
            {"terminal", b.terminal},
            {"max", b.max()}}},
          {"tip_error", r.tip_error},
          {"tip_angle_error",
           {r.tip_angle_error(0), r.tip_angle_error(1), r.tip_angle_error(2)}}};
}

json artifact_to_json(const SolutionArtifact& a) {
  return {{"spec_version", kSpecVersion},
          {"scenario", a.scenario},
          {"L", a.pose.length()},
          {"T", a.pose.duration()},
          {"p", surface_to_json(a.pose.p)},
          {"phi", surface_to_json(a.pose.phi)},
          {"theta", surface_to_json(a.pose.theta)},
          {"psi", surface_to_json(a.pose.psi)},
          {"solver", solver_report_to_json(a.solver)},
          {"verification", a.verification}};
}

SolutionArtifact artifact_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "solution must be a JSON object");
  if (!j.contains("spec_version") || j["spec_version"] != kSpecVersion) {
    throw SchemaError("spec_version", "expected 1");
  }
  for (const char* key : {"p", "phi", "theta", "psi", "solver"}) {
    if (!j.contains(key)) throw SchemaError(key, "missing field");
  }
  PoseSurfaces pose{surface_from_json(j["p"], "p"), surface_from_json(j["phi"], "phi"),
                    surface_from_json(j["theta"], "theta"), surface_from_json(j["psi"], "psi")};
  if (pose.p.dim() != 3) throw SchemaError("p.d", "expected 3");
  for (const auto* g : {&pose.phi, &pose.theta, &pose.psi}) {
    if (g->dim() != 1) throw SchemaError("phi.d", "angle surfaces must be scalar");
  }
  try {
    pose.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError("p", e.what());
  }
  SolutionArtifact a{j.value("scenario", std::string()), std::move(pose),
                     solver_report_from_json(j["solver"]),
                     j.contains("verification") ? j["verification"] : json(nullptr)};
  return a;
}

SamplingGrid parse_grid(const std::string& text) {
  SamplingGrid g;
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    g.n_s = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(text);
    const std::string rest = text.substr(x + 1);
    g.n_t = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    g.validate();
  } catch (const std::exception&) {
    throw SchemaError("--grid", "expected NSxNT with both counts >= 2, got '" + text + "'");
  }
  return g;
}

std::string trajectory_csv(const PoseSurfaces& pose, const SamplingGrid& grid) {
  std::string out = "s,t,x,y,z,phi,theta,psi\n";
  const auto ss = grid.s_samples(pose.p.s_domain());
  const auto ts = time_samples(grid, pose.p.t_domain());
  for (double t : ts) {
    for (double s : ss) {
      const Eigen::VectorXd p = pose.p.evaluate(s, t);
      out += fmt(s) + "," + fmt(t) + "," + fmt(p(0)) + "," + fmt(p(1)) + "," + fmt(p(2)) +
             "," + fmt(pose.phi.value(s, t)) + "," + fmt(pose.theta.value(s, t)) + "," +
             fmt(pose.psi.value(s, t)) + "\n";
    }
  }
  return out;
}

std::string constraints_csv(const PoseSurfaces& pose, const FeasibilityBounds& b,
                            const SamplingGrid& grid) {
  const BernsteinSurface angles = pose.angles();
  const BernsteinSurface ps = partial_s(pose.p);
  const BernsteinSurface pt = partial_t(pose.p);
  const BernsteinSurface pss = partial_s(ps);
  const BernsteinSurface ptt = partial_t(pt);
  const BernsteinSurface as = partial_s(angles);
  const BernsteinSurface at = partial_t(angles);
  std::string out =
      "s,t,v,q,u,omega,v_s,q_t,v_min,v_max,q_max,u_max,omega_max,v_s_max,q_t_max\n";
  const std::string tail = "," + fmt(b.v_min) + "," + fmt(b.v_max) + "," + fmt(b.q_max) + "," +
                           fmt(b.u_max) + "," + fmt(b.omega_max) + "," + fmt(b.v_s_max) + "," +
                           fmt(b.q_t_max) + "\n";
  for (double t : grid.t_samples(pose.p.t_domain())) {
    for (double s : grid.s_samples(pose.p.s_domain())) {
      out += fmt(s) + "," + fmt(t);
      for (const auto* g : {&ps, &pt, &as, &at, &pss, &ptt}) {
        out += "," + fmt(g->evaluate(s, t).norm());
      }
      out += tail;
    }
  }
  return out;
}

}  // namespace rodplan::cli
