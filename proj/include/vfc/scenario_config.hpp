// Copyright 2026 The vfc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vfc/analysis.hpp"
#include "vfc/sim.hpp"

namespace vfc {

/// Declarative description of one run: which plant, path, constraint and
/// controller, with all gains and initial conditions. Serializes to JSON
/// (comments are accepted on input) and round-trips losslessly.
struct ScenarioConfig {
  std::string id;

  std::string plant = "pvtol";  // pvtol | manipulator
  double pvtol_m_bar = 1.0;
  double pvtol_J_bar = 0.5;
  double pvtol_g0 = 9.8;
  ManipulatorGeometry geom{};

  std::string path = "sinusoid";
  PathParams path_params{};

  std::string constraint = "vfc";   // vfc | ccfc (ccfc only for the
                                    // feasibility demonstration)
  std::string controller = "nominal";  // nominal | adaptive_robust
  std::string plant_mode = "nominal";  // nominal | true
  double kappa = 5.0;
  double mu = 0.1;
  double l1 = 0.5;
  double l2 = 0.1;
  double eps_dz = 1.0;

  std::vector<double> gvf_gains = {1.0, 1.0};
  std::vector<double> P_diag = {1.0, 1.0};

  std::vector<double> q0 = {2.2, 0.2, 1.5};
  std::vector<double> qdot0 = {1.0, 0.0, 0.0};
  double w0 = 0.1;
  std::vector<double> alpha0 = {};

  double duration = 30.0;
  double step = 1e-3;
  std::string out_dir = "out";
};

/// Serialization. parse_config accepts // and /* */ comments.
std::string to_json_text(const ScenarioConfig& config);
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config_file(const std::string& path);

/// Structural validation; throws std::invalid_argument naming the offending
/// field (catalog names, dimensions, positivity).
void validate(const ScenarioConfig& config);

/// Bundled presets, one per benchmark experiment.
const std::vector<std::string>& preset_names();
ScenarioConfig preset(const std::string& name);

/// Plant with the benchmark uncertainty signals attached.
MechanicalSystem make_plant(const ScenarioConfig& config);

/// Constraint context over the configured path (manipulator paths are mapped
/// to joint space first, which throws std::domain_error when the task path
/// leaves the arm's reach).
VfcContext make_context(const ScenarioConfig& config);

/// Same, but over a caller-supplied path (a joint-space path for the
/// manipulator).
VfcContext make_context_with(const ScenarioConfig& config, ParametricPath path);

/// Runtime assembly: plant with the benchmark uncertainty signals, path (the
/// manipulator maps its task path to joint space), constraint context,
/// controller and bound function.
Scenario make_scenario(const ScenarioConfig& config);

/// Task-space mapping for manipulator scenarios (empty otherwise).
std::optional<TaskSpaceMap> make_task_map(const ScenarioConfig& config);

}  // namespace vfc
