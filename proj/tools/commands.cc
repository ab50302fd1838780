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


#include "commands.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "artifacts.h"
#include "rodplan/transcription.h"

namespace rodplan::cli {
namespace {

using nlohmann::json;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

double min_clearance(const VerificationReport& r) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : r.clearance) best = std::min(best, c.min_distance);
  return best;
}

void print_summary(std::ostream& out, const std::string& name, const PlanOutcome& p) {
  out << name << ": " << to_string(p.solver.status) << " cost " << num(p.solver.cost) << " T "
      << num(p.pose.duration()) << " iterations " << p.solver.iterations << " time "
      << num(p.solver.wall_time) << " s\n";
  out << "  verification " << (p.verification.pass() ? "pass" : "fail") << ", worst violation "
      << num(p.verification.feasibility.max_violation()) << ", boundary "
      << num(p.verification.boundary.max()) << ", tip error " << num(p.verification.tip_error)
      << " m";
  if (!p.verification.clearance.empty()) {
    out << ", min clearance " << num(min_clearance(p.verification)) << " m";
  }
  out << "\n";
  for (const auto& f : p.verification.failures) out << "  failed: " << f << "\n";
}

// Writes the four plan files; returns the exit code for the outcome.
int write_plan(const ScenarioSpec& spec, const PlanOutcome& p,
               const std::filesystem::path& out_dir, const SamplingGrid& grid) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  const json verification = verification_to_json(p.verification);
  const SolutionArtifact artifact{spec.name, p.pose, p.solver, verification};
  write_atomic(out_dir / "solution.json", artifact_to_json(artifact).dump(2) + "\n");
  write_atomic(out_dir / "report.json",
               json{{"scenario", spec.name},
                    {"m", spec.m},
                    {"n", spec.n},
                    {"T", p.pose.duration()},
                    {"solver", solver_report_to_json(p.solver)},
                    {"verification", verification}}
                       .dump(2) +
                   "\n");
  write_atomic(out_dir / "trajectory.csv", trajectory_csv(p.pose, grid));
  write_atomic(out_dir / "constraints.csv", constraints_csv(p.pose, spec.bounds, grid));
  if (!is_feasible(p.solver.status)) return kExitInfeasible;
  return p.verification.pass() ? kExitOk : kExitFail;
}

}  // namespace

PlanOutcome plan(const ScenarioSpec& spec, const PlanOptions& options) {
  const TranscriptionConfig config = transcription_config(spec);
  RodPlanningProblem problem(config);
  if (problem.has_conflicting_pins()) {
    throw SchemaError("initial_configuration", "contradicts the clamped base");
  }
  SolverOptions opts = solver_options(spec);
  if (options.seed) opts.seed = *options.seed;
  SolveResult r = AugmentedLagrangianSolver(opts).solve(problem, initial_guess(config));
  r.report = certify(config, r.x, r.report);
  PoseSurfaces pose = problem.layout().unpack(r.x, config.L);
  VerificationReport verification = verify_solution(verification_spec(spec), pose, options.grid);
  return PlanOutcome{r.x, std::move(pose), r.report, std::move(verification)};
}

std::vector<std::pair<int, int>> parse_orders(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw SchemaError("--orders", "cannot parse '" + text + "'");
    }
    return v;
  };
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) {
      const int m = to_int(item);
      out.emplace_back(m, m);
    } else {
      out.emplace_back(to_int(item.substr(0, x)), to_int(item.substr(x + 1)));
    }
  }
  if (out.empty()) throw SchemaError("--orders", "empty order list");
  return out;
}

int cmd_plan(const std::filesystem::path& scenario_path, const std::filesystem::path& out_dir,
             const PlanOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const ScenarioSpec spec = parse_scenario(read_json(scenario_path));
    const PlanOutcome p = plan(spec, options);
    const int code = write_plan(spec, p, out_dir, options.grid);
    if (!options.quiet) print_summary(out, spec.name.empty() ? "plan" : spec.name, p);
    return code;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  }
}

int cmd_verify(const std::filesystem::path& solution_path,
               const std::filesystem::path& scenario_path, const SamplingGrid& grid,
               std::ostream& out, std::ostream& err) {
  try {
    const SolutionArtifact a = artifact_from_json(read_json(solution_path));
    const ScenarioSpec spec = parse_scenario(read_json(scenario_path));
    if (a.pose.m() != spec.m || a.pose.n() != spec.n) {
      err << "order mismatch: solution is " << a.pose.m() << "x" << a.pose.n()
          << ", scenario is " << spec.m << "x" << spec.n << "\n";
      return kExitSchema;
    }
    if (std::abs(a.pose.length() - spec.L) > 1e-12 * spec.L) {
      err << "rod length mismatch: solution L " << a.pose.length() << ", scenario L " << spec.L
          << "\n";
      return kExitSchema;
    }
    const VerificationReport r = verify_solution(verification_spec(spec), a.pose, grid);
    out << verification_to_json(r).dump(2) << "\n";
    return r.pass() ? kExitOk : kExitFail;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  }
}

int cmd_eval(const std::filesystem::path& solution_path, double s, double t, std::ostream& out,
             std::ostream& err) {
  try {
    const SolutionArtifact a = artifact_from_json(read_json(solution_path));
    const PoseSurfaces& pose = a.pose;
    if (!pose.p.s_domain().contains(s) || !pose.p.t_domain().contains(t)) {
      err << "(s, t) = (" << num(s) << ", " << num(t) << ") outside [0, " << num(pose.length())
          << "] x [0, " << num(pose.duration()) << "]\n";
      return kExitSchema;
    }
    const Eigen::VectorXd p = pose.p.evaluate(s, t);
    const double phi = pose.phi.value(s, t);
    const double theta = pose.theta.value(s, t);
    const double psi = pose.psi.value(s, t);
    const Eigen::Matrix3d R = euler_to_rotation(phi, theta, psi);
    char buf[160];
    std::snprintf(buf, sizeof buf, "position %.17g %.17g %.17g\n", p(0), p(1), p(2));
    out << buf;
    std::snprintf(buf, sizeof buf, "angles %.17g %.17g %.17g\n", phi, theta, psi);
    out << buf;
    out << "rotation\n";
    for (int r = 0; r < 3; ++r) {
      std::snprintf(buf, sizeof buf, "  %.17g %.17g %.17g\n", R(r, 0), R(r, 1), R(r, 2));
      out << buf;
    }
    return kExitOk;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  }
}

int cmd_sweep(const std::filesystem::path& scenario_path,
              const std::vector<std::pair<int, int>>& orders,
              const std::filesystem::path& out_dir, const PlanOptions& options,
              std::ostream& out, std::ostream& err) {
  ScenarioSpec base;
  try {
    base = parse_scenario(read_json(scenario_path));
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  }
  std::string csv =
      "m,n,status,cost,T,wall_time,iterations,worst_violation,min_clearance,verdict,flagged,"
      "error\n";
  bool any_flagged = false;
  for (const auto& [m, n] : orders) {
    std::string row = std::to_string(m) + "," + std::to_string(n) + ",";
    try {
      const ScenarioSpec spec = base.with_orders(m, n);
      const PlanOutcome p = plan(spec, options);
      const auto dir = out_dir / ("m" + std::to_string(m) + "_n" + std::to_string(n));
      const int code = write_plan(spec, p, dir, options.grid);
      const bool flagged = code != kExitOk;
      any_flagged |= flagged;
      row += to_string(p.solver.status) + "," + num(p.solver.cost) + "," +
             num(p.pose.duration()) + "," + num(p.solver.wall_time) + "," +
             std::to_string(p.solver.iterations) + "," +
             num(p.verification.feasibility.max_violation()) + "," +
             (p.verification.clearance.empty() ? std::string() : num(min_clearance(p.verification))) +
             "," + (p.verification.pass() ? "pass" : "fail") + "," + (flagged ? "1" : "0") + ",";
      if (!options.quiet) print_summary(out, "m=" + std::to_string(m) + " n=" + std::to_string(n), p);
    } catch (const std::exception& e) {
      any_flagged = true;
      std::string msg = e.what();
      for (char& c : msg) {
        if (c == ',' || c == '\n' || c == '"') c = ' ';
      }
      row += "error,,,,,,,fail,1," + msg;
      if (!options.quiet) out << "m=" << m << " n=" << n << ": error: " << e.what() << "\n";
    }
    csv += row + "\n";
    // Rewritten after every row so an interrupted sweep keeps what it has.
    try {
      write_atomic(out_dir / "sweep.csv", csv);
    } catch (const IoError& e) {
      err << "io error: " << e.what() << "\n";
      return kExitIo;
    }
  }
  return any_flagged ? kExitFail : kExitOk;
}

}  // namespace rodplan::cli
