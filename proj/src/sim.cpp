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

#include "vfc/sim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vfc/vectorfield.hpp"

namespace vfc {

namespace {

struct Unpacked {
  Eigen::VectorXd q, qdot, alpha;
  double w;
};

Unpacked unpack(const Scenario& sc, const Eigen::VectorXd& y) {
  const int n = sc.sys.n;
  const int k = (sc.controller == ControllerKind::AdaptiveRobust)
                    ? static_cast<int>(sc.alpha0.size())
                    : 0;
  Unpacked u;
  u.q = y.segment(0, n);
  u.qdot = y.segment(n, n);
  u.w = y(2 * n);
  u.alpha = y.segment(2 * n + 1, k);
  return u;
}

Eigen::VectorXd control_input(const Scenario& sc, const Unpacked& u, double t) {
  Eigen::VectorXd tau = nominal_tau(sc.ctx, sc.sys, sc.cfg, u.q, u.qdot, u.w, t);
  if (sc.controller == ControllerKind::AdaptiveRobust)
    tau += robust_p3(sc.ctx, sc.sys, sc.cfg, sc.bound, u.alpha, u.q, u.qdot,
                     u.w, t);
  return tau;
}

Eigen::VectorXd augmented(const Scenario& sc, const Eigen::VectorXd& q,
                          double w) {
  const int m = sc.ctx.path.dim_m();
  Eigen::VectorXd xi(m + 1);
  xi.head(m) = sc.ctx.A.apply(q);
  xi(m) = w;
  return xi;
}

}  // namespace

TrajectoryLog run_scenario(const Scenario& sc) {
  if (!(sc.step > 0.0)) throw std::invalid_argument("run_scenario: step <= 0");
  if (sc.duration < 0.0)
    throw std::invalid_argument("run_scenario: negative duration");
  if (sc.q0.size() != sc.sys.n || sc.qdot0.size() != sc.sys.n)
    throw std::invalid_argument("run_scenario: initial state dimension");
  const bool adaptive = (sc.controller == ControllerKind::AdaptiveRobust);
  if (adaptive) {
    if (sc.alpha0.size() != sc.bound.k_dim)
      throw std::invalid_argument("run_scenario: alpha0 size != k_dim");
    if ((sc.alpha0.array() <= 0.0).any())
      throw std::invalid_argument("run_scenario: alpha0 must be positive");
  }
  sc.cfg.validate();

  const int n = sc.sys.n;
  const int k = adaptive ? static_cast<int>(sc.alpha0.size()) : 0;
  const int steps = static_cast<int>(std::llround(sc.duration / sc.step));

  Eigen::VectorXd y(2 * n + 1 + k);
  y.segment(0, n) = sc.q0;
  y.segment(n, n) = sc.qdot0;
  y(2 * n) = sc.w0;
  if (adaptive) y.segment(2 * n + 1, k) = sc.alpha0;

  auto deriv = [&sc, n, k](const Eigen::VectorXd& state,
                           double t) -> Eigen::VectorXd {
    const Unpacked u = unpack(sc, state);
    const Eigen::VectorXd tau = control_input(sc, u, t);
    const Eigen::VectorXd qdd =
        forward_accel(sc.sys, sc.mode, u.q, u.qdot, tau, t);
    Eigen::VectorXd rate(2 * n + 1 + k);
    rate.segment(0, n) = u.qdot;
    rate.segment(n, n) = qdd;
    rate(2 * n) = w_dot(sc.ctx.path, sc.ctx.gains, augmented(sc, u.q, u.w));
    if (k > 0) {
      const Eigen::VectorXd pb =
          sc.bound.pi_breve(u.q, u.qdot, u.w, t);
      const double bb =
          beta_breve(sc.ctx, sc.sys, u.q, u.qdot, u.w, t).norm();
      rate.segment(2 * n + 1, k) = adaptive_rate(sc.cfg, pb, bb, u.alpha);
    }
    return rate;
  };

  TrajectoryLog log;
  log.scenario_id = sc.id;
  log.step = sc.step;
  log.controller = sc.controller;
  log.records.reserve(static_cast<size_t>(steps) + 1);

  auto record_at = [&](const Eigen::VectorXd& state, double t) {
    const Unpacked u = unpack(sc, state);
    LogRecord rec;
    rec.state = {t, u.q, u.qdot, u.w, u.alpha};
    rec.tau = control_input(sc, u, t);
    rec.beta = vfc_beta(sc.ctx, u.q, u.qdot, u.w);
    rec.phi = phi(sc.ctx.path, augmented(sc, u.q, u.w));
    rec.wdot = w_dot(sc.ctx.path, sc.ctx.gains, augmented(sc, u.q, u.w));
    log.records.push_back(std::move(rec));
  };

  record_at(y, 0.0);
  for (int i = 0; i < steps; ++i) {
    const double t = i * sc.step;
    y = rk4_step(deriv, y, t, sc.step);
    if (k > 0)
      y.segment(2 * n + 1, k) = y.segment(2 * n + 1, k).cwiseMax(1e-12);
    if (!y.allFinite()) {
      std::ostringstream os;
      os << "run_scenario: non-finite state at step " << i + 1 << " (t="
         << (i + 1) * sc.step << "), scenario '" << sc.id << "'";
      throw std::runtime_error(os.str());
    }
    record_at(y, (i + 1) * sc.step);
  }
  return log;
}

}  // namespace vfc
