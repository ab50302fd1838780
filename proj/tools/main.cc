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


#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "artifacts.h"
#include "commands.h"

int main(int argc, char** argv) {
  using namespace rodplan::cli;
  CLI::App app{"Continuum rod motion planning on Bernstein surfaces"};
  app.require_subcommand(1);

  std::string scenario, solution, out_dir = "out", grid_text = "201x201", orders_text;
  std::uint64_t seed = 0;
  bool quiet = false;
  double s = 0.0, t = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--grid", grid_text, "Sampling lattice NSxNT")->capture_default_str();
  };

  CLI::App* plan_cmd = app.add_subcommand("plan", "Plan a scenario and verify the result");
  plan_cmd->add_option("scenario", scenario, "Scenario JSON")->required();
  plan_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  CLI::Option* plan_seed = plan_cmd->add_option("--seed", seed, "Override the solver seed");
  plan_cmd->add_flag("--quiet", quiet, "Suppress the summary");
  add_common(plan_cmd);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Re-verify a solution file");
  verify_cmd->add_option("solution", solution, "solution.json")->required();
  verify_cmd->add_option("scenario", scenario, "Scenario JSON")->required();
  add_common(verify_cmd);

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a solution at (s, t)");
  eval_cmd->add_option("solution", solution, "solution.json")->required();
  eval_cmd->add_option("s", s, "Arc length")->required();
  eval_cmd->add_option("t", t, "Time")->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Plan a scenario at several orders");
  sweep_cmd->add_option("scenario", scenario, "Scenario JSON")->required();
  sweep_cmd->add_option("--orders", orders_text, "e.g. 3,4,5,6 or 4x6,5x5")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  CLI::Option* sweep_seed = sweep_cmd->add_option("--seed", seed, "Override the solver seed");
  sweep_cmd->add_flag("--quiet", quiet, "Suppress per-row summaries");
  add_common(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }

  try {
    PlanOptions options;
    options.grid = parse_grid(grid_text);
    options.quiet = quiet;
    if (plan_seed->count() > 0 || sweep_seed->count() > 0) options.seed = seed;

    if (*plan_cmd) return cmd_plan(scenario, out_dir, options, std::cout, std::cerr);
    if (*verify_cmd) return cmd_verify(solution, scenario, options.grid, std::cout, std::cerr);
    if (*eval_cmd) return cmd_eval(solution, s, t, std::cout, std::cerr);
    if (*sweep_cmd) {
      return cmd_sweep(scenario, parse_orders(orders_text), out_dir, options, std::cout,
                       std::cerr);
    }
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitFail;
}
