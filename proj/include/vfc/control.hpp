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
#include <utility>
#include <vector>

#include "vfc/constraint.hpp"
#include "vfc/plants.hpp"

namespace vfc {

/// Scalar controller parameters. The gain matrix P lives in VfcContext so the
/// constraint and the controllers share one definition.
struct ControllerConfig {
  double kappa = 5.0;    // feedback gain on beta
  double mu = 0.1;       // smooth-direction threshold in p3
  double l1 = 0.5;       // adaptive-law data gain
  double l2 = 0.1;       // adaptive-law leakage gain
  double eps_dz = 1.0;   // adaptive-law switching threshold

  void validate() const;
};

/// Known envelope shape of the aggregated uncertainty: Pi(alpha, .) =
/// alpha^T pi_breve(q, qdot, w, t), with non-negative factor entries.
struct BoundFunction {
  int k_dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& q,
                                const Eigen::VectorXd& qdot, double w,
                                double t)>
      pi_breve;
};

/// Nominal control split tau = p1 + p2:
///   p1 = (A Mbar^-1 Bbar)^-1 [ b + A Mbar^-1 (Cbar qdot + gbar) ]
///   p2 = -kappa (A Mbar^-1 Bbar)^T P beta.
struct NominalParts {
  Eigen::VectorXd p1;
  Eigen::VectorXd p2;
  Eigen::VectorXd tau() const { return p1 + p2; }
};

NominalParts nominal_parts(const VfcContext& ctx, const MechanicalSystem& sys,
                           const ControllerConfig& cfg,
                           const Eigen::VectorXd& q,
                           const Eigen::VectorXd& qdot, double w, double t);

Eigen::VectorXd nominal_tau(const VfcContext& ctx, const MechanicalSystem& sys,
                            const ControllerConfig& cfg,
                            const Eigen::VectorXd& q,
                            const Eigen::VectorXd& qdot, double w, double t);

/// Adaptive robust action p3 = -eta upsilon Pi with
/// upsilon = beta_breve Pi, beta_breve = Bbar^T Mbar^-1 A^T P beta and
/// eta = 1/max(||upsilon||, mu) realized piecewise.
Eigen::VectorXd robust_p3(const VfcContext& ctx, const MechanicalSystem& sys,
                          const ControllerConfig& cfg,
                          const BoundFunction& bound,
                          const Eigen::VectorXd& alpha_hat,
                          const Eigen::VectorXd& q, const Eigen::VectorXd& qdot,
                          double w, double t);

/// beta_breve = Bbar^T Mbar^-1 A^T P beta at the given state.
Eigen::VectorXd beta_breve(const VfcContext& ctx, const MechanicalSystem& sys,
                           const Eigen::VectorXd& q,
                           const Eigen::VectorXd& qdot, double w, double t);

/// Leakage-type adaptive law:
///   alpha_hat_dot = l1 pi_breve ||beta_breve|| - l2 alpha_hat
/// when ||pi_breve|| ||beta_breve|| > eps_dz, and the smoothed variant
///   l1 pi_breve ||pi_breve|| ||beta_breve||^2 / eps_dz - l2 alpha_hat
/// otherwise.
Eigen::VectorXd adaptive_rate(const ControllerConfig& cfg,
                              const Eigen::VectorXd& pi_breve_value,
                              double beta_breve_norm,
                              const Eigen::VectorXd& alpha_hat);

/// Uncertainty envelope factors for the PVTOL:
/// pi_breve = ( ||(A Mbar^-1 Bbar)^-1 A Mbar^-1||_2, ||p1|| ), k = 2.
BoundFunction pvtol_pi(const MechanicalSystem& sys, const VfcContext& ctx);

/// Scalar envelope factor for the manipulator:
/// pi_breve = ( ||qdot||^2 + ||qdot|| + 1 ), k = 1.
BoundFunction manipulator_pi();

/// Grid estimate of the minimal eigenvalue of
/// P (A Mbar^-1 Bbar)(A Mbar^-1 Bbar)^T P over the given states and times;
/// a positive result certifies the gain-matrix assumption on the grid.
double check_assumption4(const MechanicalSystem& sys, const SelectionMatrix& A,
                         const Eigen::MatrixXd& P,
                         const std::vector<Eigen::VectorXd>& states,
                         const std::vector<double>& times);

/// Grid estimate of rho_W = 1/2 min lambda_min(W + W^T) with
/// W = B_check + H_check B; must exceed -1 for the adaptive design to apply.
double check_assumption5(const MechanicalSystem& sys, const SelectionMatrix& A,
                         const std::vector<Eigen::VectorXd>& states,
                         const std::vector<double>& times);

/// Matched/mismatched split of H = Mbar M^-1 - I with respect to Bbar:
/// H_check = (A Mbar^-1 Bbar)^-1 A Mbar^-1 H, H_tilde = H - Bbar H_check.
/// The mismatched part satisfies A Mbar^-1 H_tilde = 0.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> decompose_matched(
    const MechanicalSystem& sys, const SelectionMatrix& A,
    const Eigen::VectorXd& q, double t);

/// Same split applied to an arbitrary matrix X (columns may be a vector).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> matched_split(
    const MechanicalSystem& sys, const SelectionMatrix& A,
    const Eigen::MatrixXd& X, const Eigen::VectorXd& q, double t);

}  // namespace vfc
