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
#include <optional>

#include "vfc/sim.hpp"

namespace vfc {

/// Per-sample error signals extracted from a trajectory log. All series share
/// the log's time grid and are non-negative.
struct ErrorSeries {
  Eigen::VectorXd t;
  Eigen::VectorXd beta_norm;
  Eigen::VectorXd phi_norm;
  Eigen::VectorXd dist_hgh;   // distance of (A q, w) to the augmented path
  Eigen::VectorXd dist_phys;  // distance of the physical point to the path
  Eigen::VectorXd effort;     // ||tau||
};

/// For joint-space scenarios whose task lives elsewhere (the manipulator):
/// maps the configuration to task space before measuring dist_phys.
struct TaskSpaceMap {
  std::function<Eigen::Vector3d(const Eigen::VectorXd& q,
                                const Eigen::Vector3d& seed)>
      to_task;
  ParametricPath task_path;
  Eigen::Vector3d seed0;
};

/// Extracts the error series. Distances are minimized over the window
/// [w - M, w + M] with M = pi + 1 + 2||phi||, which always contains the
/// minimizer for the catalog paths while following w wherever the run took it.
ErrorSeries error_series(const TrajectoryLog& log, const VfcContext& ctx,
                         const TaskSpaceMap* task = nullptr,
                         int resolution = 2000);

/// Uniform-ultimate-boundedness bounds of the composite error
/// (beta, alpha_hat - alpha).
struct UubBounds {
  double K1 = 0.0;
  double K2 = 0.0;
  double K3 = 0.0;
  double X1 = 0.0;
  double X2 = 0.0;
  double R = 0.0;
  double dbar = 0.0;

  /// Time for the composite error to reach the ultimate bound from initial
  /// size s (piecewise, zero when already inside).
  double time_to_bound(double s) const;
};

/// Evaluates the closed-form bound set:
///   K1 = min{2 kappa lambda_low (1+rho_w), 2 (1+rho_w) l2/l1}
///   K2 = 2 (1+rho_w) (l2/l1) ||alpha||
///   K3 = (1+rho_w) mu / 2          (the derivation's form; the bare listing
///                                   without mu is a known misprint)
///   X1 = min{lambda_min(P), 2 (1+rho_w)/l1},  X2 = max{...}
///   R  = (K2 + sqrt(K2^2 + 4 K1 K3)) / (2 K1),  dbar = sqrt(X2/X1) R.
/// Requires rho_w > -1.
UubBounds uub_bounds(double kappa, double lambda_low, double rho_w, double l1,
                     double l2, double mu, double alpha_norm,
                     const Eigen::MatrixXd& P);

struct SettleMetrics {
  double ultimate_bound_est = 0.0;  // max dist_phys over the trailing fraction
  double settle_time = 0.0;  // first t after which dist_phys stays below
                             // 1.05 * ultimate_bound_est
  double mean_effort = 0.0;  // time average of ||tau||
};

SettleMetrics settle_metrics(const ErrorSeries& series, double tail_fraction);

/// Least-squares line through (t, log y) restricted to t >= t_min and
/// y > floor; used to verify exponential decay rates.
struct LogLinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int samples = 0;
};

LogLinearFit fit_log_linear(const Eigen::VectorXd& t, const Eigen::VectorXd& y,
                            double t_min, double floor);

}  // namespace vfc
