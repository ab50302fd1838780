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


#ifndef RODPLAN_TOOLS_ARTIFACTS_H_
#define RODPLAN_TOOLS_ARTIFACTS_H_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "rodplan/bernstein.h"
#include "rodplan/nlp.h"
#include "rodplan/rod.h"
#include "rodplan/validation.h"

namespace rodplan::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

// {"m", "n", "L", "T", "d", "cps": [[[x, y, z], ...], ...]}, cps[i][j] is the
// control point for s-index i and t-index j.
nlohmann::json surface_to_json(const BernsteinSurface& surface);
BernsteinSurface surface_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json solver_report_to_json(const SolverReport& report);
SolverReport solver_report_from_json(const nlohmann::json& j);
nlohmann::json verification_to_json(const VerificationReport& report);

struct SolutionArtifact {
  std::string scenario;
  PoseSurfaces pose;
  SolverReport solver;
  // Kept verbatim so that the file is self-describing.
  nlohmann::json verification;
};

nlohmann::json artifact_to_json(const SolutionArtifact& artifact);
SolutionArtifact artifact_from_json(const nlohmann::json& j);

// Parses "NSxNT", e.g. "201x201".
SamplingGrid parse_grid(const std::string& text);

// Columns s, t, x, y, z, phi, theta, psi. The t samples are the uniform grid
// merged with every whole second in [0, T].
std::string trajectory_csv(const PoseSurfaces& pose, const SamplingGrid& grid);
// Columns s, t, then each constrained norm (v, q, u, omega, v_s, q_t, not
// squared) and the bound it is held to.
std::string constraints_csv(const PoseSurfaces& pose, const FeasibilityBounds& bounds,
                            const SamplingGrid& grid);

}  // namespace rodplan::cli

#endif  // RODPLAN_TOOLS_ARTIFACTS_H_
