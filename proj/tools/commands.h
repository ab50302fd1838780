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


#ifndef RODPLAN_TOOLS_COMMANDS_H_
#define RODPLAN_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rodplan/nlp.h"
#include "rodplan/rod.h"
#include "rodplan/validation.h"
#include "scenario.h"

namespace rodplan::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFail = 1,
  kExitSchema = 2,
  kExitInfeasible = 3,
  kExitIo = 4,
};

struct PlanOptions {
  std::optional<std::uint64_t> seed;
  SamplingGrid grid;
  bool quiet = false;
};

struct PlanOutcome {
  Eigen::VectorXd x;
  PoseSurfaces pose;
  SolverReport solver;
  VerificationReport verification;
};

// Scenario -> transcription -> solve -> independent verification.
PlanOutcome plan(const ScenarioSpec& spec, const PlanOptions& options = {});

// "5" or "3,4,5" (m = n) or "4x6,5x5".
std::vector<std::pair<int, int>> parse_orders(const std::string& text);

int cmd_plan(const std::filesystem::path& scenario_path, const std::filesystem::path& out_dir,
             const PlanOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const std::filesystem::path& solution_path,
               const std::filesystem::path& scenario_path, const SamplingGrid& grid,
               std::ostream& out, std::ostream& err);
int cmd_eval(const std::filesystem::path& solution_path, double s, double t, std::ostream& out,
             std::ostream& err);
// Writes <out_dir>/sweep.csv plus one plan directory per order pair.
int cmd_sweep(const std::filesystem::path& scenario_path,
              const std::vector<std::pair<int, int>>& orders,
              const std::filesystem::path& out_dir, const PlanOptions& options,
              std::ostream& out, std::ostream& err);

}  // namespace rodplan::cli

#endif  // RODPLAN_TOOLS_COMMANDS_H_
