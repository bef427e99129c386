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

#include <string>

#include "vfc/analysis.hpp"
#include "vfc/scenario_config.hpp"

namespace vfc {

/// Trajectory CSV: t, q..., qdot..., w, alpha_hat..., tau..., beta_norm,
/// phi_norm, dist_hgh, dist_phys. 13 significant digits, deterministic.
std::string trajectory_csv(const TrajectoryLog& log, const ErrorSeries& series);

/// Structured metrics report (JSON): terminal errors, settle metrics, and for
/// adaptive runs the closed-form ultimate bounds evaluated with
/// ||alpha|| = terminal ||alpha_hat|| (plus any caller-supplied override).
std::string metrics_json(const ScenarioConfig& config, const TrajectoryLog& log,
                         const ErrorSeries& series, double lambda_low,
                         double rho_w, double alpha_norm_override = -1.0);

/// Static SVG: desired path + trajectory overlay (first two coordinates) on
/// the left, error curves on the right.
std::string trajectory_svg(const TrajectoryLog& log, const ErrorSeries& series,
                           const VfcContext& ctx);

}  // namespace vfc
