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
#include <utility>

#include "vfc/geometry.hpp"

namespace vfc {

/// Per-component convergence gains of the guiding vector field; all positive.
struct GvfGains {
  Eigen::VectorXd k;

  explicit GvfGains(Eigen::VectorXd gains);
  GvfGains() = default;
};

/// Full singularity-free guiding vector field on the augmented space:
/// first m entries (-1)^m f'_i(w) - k_i phi_i(xi), last entry
/// (-1)^m + sum_i k_i phi_i(xi) f'_i(w). Never vanishes: if the first m
/// entries are zero the last one has magnitude >= 1.
Eigen::VectorXd gvf_full(const ParametricPath& path, const GvfGains& gains,
                         const Eigen::VectorXd& xi);

/// Physical-coordinate part of the field (first m entries of gvf_full).
Eigen::VectorXd chi_s(const ParametricPath& path, const GvfGains& gains,
                      const Eigen::VectorXd& xi);

/// Virtual-coordinate rate (last entry of gvf_full).
double w_dot(const ParametricPath& path, const GvfGains& gains,
             const Eigen::VectorXd& xi);

/// Partial derivatives of chi_s: d(chi_s)/d(zeta) = -diag(k) and
/// d(chi_s)/dw with components (-1)^m f''_i(w) + k_i f'_i(w).
std::pair<Eigen::MatrixXd, Eigen::VectorXd> chi_s_jacobians(
    const ParametricPath& path, const GvfGains& gains,
    const Eigen::VectorXd& xi);

}  // namespace vfc
