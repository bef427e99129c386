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

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "vfc/control.hpp"

namespace vfc {

/// Classical fixed-step 4th-order Runge-Kutta update.
template <class Derivative>
Eigen::VectorXd rk4_step(Derivative&& f, const Eigen::VectorXd& y, double t,
                         double h) {
  const Eigen::VectorXd k1 = f(y, t);
  const Eigen::VectorXd k2 = f(y + 0.5 * h * k1, t + 0.5 * h);
  const Eigen::VectorXd k3 = f(y + 0.5 * h * k2, t + 0.5 * h);
  const Eigen::VectorXd k4 = f(y + h * k3, t + h);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

enum class ControllerKind { Nominal, AdaptiveRobust };

/// Augmented simulation state (q, qdot, w, alpha_hat) at time t; alpha_hat is
/// empty under the nominal controller.
struct SimState {
  double t = 0.0;
  Eigen::VectorXd q;
  Eigen::VectorXd qdot;
  double w = 0.0;
  Eigen::VectorXd alpha_hat;
};

/// One log row: the state plus the control and constraint diagnostics
/// evaluated at that state.
struct LogRecord {
  SimState state;
  Eigen::VectorXd tau;
  Eigen::VectorXd beta;
  Eigen::VectorXd phi;
  double wdot = 0.0;
};

struct TrajectoryLog {
  std::string scenario_id;
  double step = 0.0;
  ControllerKind controller = ControllerKind::Nominal;
  std::vector<LogRecord> records;
};

/// Fully assembled scenario, ready to integrate.
struct Scenario {
  std::string id;
  MechanicalSystem sys;
  VfcContext ctx;
  ControllerConfig cfg;
  BoundFunction bound;  // read only under the adaptive-robust controller
  ControllerKind controller = ControllerKind::Nominal;
  PlantMode mode = PlantMode::Nominal;
  Eigen::VectorXd q0;
  Eigen::VectorXd qdot0;
  double w0 = 0.0;
  Eigen::VectorXd alpha0;
  double duration = 30.0;
  double step = 1e-3;
};

/// Integrates the coupled plant / virtual-coordinate / adaptive-parameter
/// rates with fixed-step RK4 and logs every grid point (including t0).
/// The adaptive estimate is clamped to >= 1e-12 after each step as a
/// numerical guard; its dynamics keep it positive. Throws on non-finite
/// states (reporting the divergence time) and on singular A Mbar^-1 Bbar.
TrajectoryLog run_scenario(const Scenario& scenario);

}  // namespace vfc
