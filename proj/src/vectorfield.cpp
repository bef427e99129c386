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

#include "vfc/vectorfield.hpp"

#include <stdexcept>

namespace vfc {

GvfGains::GvfGains(Eigen::VectorXd gains) : k(std::move(gains)) {
  if (k.size() == 0 || (k.array() <= 0.0).any())
    throw std::invalid_argument("GvfGains: all gains must be positive");
}

namespace {

inline double parity_sign(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

inline void check_dims(const ParametricPath& path, const GvfGains& gains,
                       const Eigen::VectorXd& xi, const char* who) {
  if (xi.size() != path.dim_m() + 1 || gains.k.size() != path.dim_m())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

Eigen::VectorXd chi_s(const ParametricPath& path, const GvfGains& gains,
                      const Eigen::VectorXd& xi) {
  check_dims(path, gains, xi, "chi_s");
  const int m = path.dim_m();
  const double sgn = parity_sign(m);
  const double w = xi(m);
  Eigen::VectorXd f(m), fp(m);
  path.eval_into(w, f);
  path.d1_into(w, fp);
  Eigen::VectorXd out(m);
  for (int i = 0; i < m; ++i)
    out(i) = sgn * fp(i) - gains.k(i) * (xi(i) - f(i));
  return out;
}

double w_dot(const ParametricPath& path, const GvfGains& gains,
             const Eigen::VectorXd& xi) {
  check_dims(path, gains, xi, "w_dot");
  const int m = path.dim_m();
  const double sgn = parity_sign(m);
  const double w = xi(m);
  Eigen::VectorXd f(m), fp(m);
  path.eval_into(w, f);
  path.d1_into(w, fp);
  double acc = sgn;
  for (int i = 0; i < m; ++i) acc += gains.k(i) * (xi(i) - f(i)) * fp(i);
  return acc;
}

Eigen::VectorXd gvf_full(const ParametricPath& path, const GvfGains& gains,
                         const Eigen::VectorXd& xi) {
  check_dims(path, gains, xi, "gvf_full");
  const int m = path.dim_m();
  Eigen::VectorXd out(m + 1);
  out.head(m) = chi_s(path, gains, xi);
  out(m) = w_dot(path, gains, xi);
  return out;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> chi_s_jacobians(
    const ParametricPath& path, const GvfGains& gains,
    const Eigen::VectorXd& xi) {
  check_dims(path, gains, xi, "chi_s_jacobians");
  const int m = path.dim_m();
  const double sgn = parity_sign(m);
  const double w = xi(m);
  Eigen::VectorXd fp(m), fpp(m);
  path.d1_into(w, fp);
  path.d2_into(w, fpp);
  Eigen::MatrixXd d_zeta = (-gains.k).asDiagonal();
  Eigen::VectorXd d_w(m);
  for (int i = 0; i < m; ++i) d_w(i) = sgn * fpp(i) + gains.k(i) * fp(i);
  return {std::move(d_zeta), std::move(d_w)};
}

}  // namespace vfc
