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

#include <doctest.h>

#include "vfc/scenario_config.hpp"

using vfc::preset;
using vfc::rk4_step;
using vfc::run_scenario;
using vfc::Scenario;
using vfc::TrajectoryLog;

TEST_CASE("rk4 point checks") {
  // Exponential growth: one step of xdot = x from 1 with h = 0.1.
  auto expo = [](const Eigen::VectorXd& y, double) { return y; };
  Eigen::VectorXd y0(1);
  y0 << 1.0;
  const Eigen::VectorXd y1 = rk4_step(expo, y0, 0.0, 0.1);
  CHECK(y1(0) == doctest::Approx(1.10517083).epsilon(1e-8));
  CHECK(std::abs(y1(0) - std::exp(0.1)) < 1e-7);

  // Zero derivative leaves the state untouched.
  auto still = [](const Eigen::VectorXd& y, double) {
    return Eigen::VectorXd::Zero(y.size()).eval();
  };
  const Eigen::VectorXd same = rk4_step(still, y0, 0.0, 0.5);
  CHECK(same(0) == 1.0);

  // Constant derivative integrates exactly.
  auto constant = [](const Eigen::VectorXd& y, double) {
    return Eigen::VectorXd::Constant(y.size(), 3.0).eval();
  };
  const Eigen::VectorXd moved = rk4_step(constant, y0, 0.0, 0.25);
  CHECK(moved(0) == doctest::Approx(1.75).epsilon(1e-15));
}

TEST_CASE("rk4 order check") {
  // Error ratio between step h and h/2 against an h/8 reference ~ 16.
  auto f = [](const Eigen::VectorXd& y, double t) {
    Eigen::VectorXd r(2);
    r(0) = y(1);
    r(1) = -std::sin(y(0)) - 0.1 * y(1) + 0.3 * std::cos(t);
    return r;
  };
  auto integrate = [&f](double h, double T) {
    Eigen::VectorXd y(2);
    y << 0.4, -0.2;
    const int steps = static_cast<int>(std::llround(T / h));
    for (int i = 0; i < steps; ++i) y = rk4_step(f, y, i * h, h);
    return y;
  };
  const double T = 2.0;
  const Eigen::VectorXd ref = integrate(T / 2048.0, T);
  const double err_h = (integrate(T / 128.0, T) - ref).norm();
  const double err_h2 = (integrate(T / 256.0, T) - ref).norm();
  const double ratio = err_h / err_h2;
  CHECK(ratio > 8.0);
  CHECK(ratio < 24.0);
}

TEST_CASE("zero-length run logs exactly the initial record") {
  auto cfg = preset("pvtol_p1_nominal");
  cfg.duration = 0.0;
  const Scenario sc = vfc::make_scenario(cfg);
  const TrajectoryLog log = run_scenario(sc);
  REQUIRE(log.records.size() == 1);
  CHECK(log.records[0].state.t == 0.0);
  CHECK(log.records[0].state.q(0) == doctest::Approx(2.2));
  CHECK(log.records[0].state.w == doctest::Approx(0.1));
}

TEST_CASE("short nominal run: grid, wdot log, beta decay") {
  auto cfg = preset("pvtol_p1_nominal");
  cfg.duration = 2.0;
  const Scenario sc = vfc::make_scenario(cfg);
  const TrajectoryLog log = run_scenario(sc);
  REQUIRE(log.records.size() == 2001);

  // Constant-step grid.
  for (size_t i = 1; i < log.records.size(); ++i) {
    const double dt =
        log.records[i].state.t - log.records[i - 1].state.t;
    CHECK(dt == doctest::Approx(1e-3).epsilon(1e-9));
  }

  // Logged wdot equals the rate recomputed from the logged state, bit for bit.
  for (size_t i = 0; i < log.records.size(); i += 97) {
    const auto& r = log.records[i];
    Eigen::VectorXd xi(3);
    xi << r.state.q(0), r.state.q(1), r.state.w;
    CHECK(r.wdot == vfc::w_dot(sc.ctx.path, sc.ctx.gains, xi));
  }

  // ||beta|| decays monotonically after the brief initial transient.
  double prev = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < log.records.size(); ++i) {
    const double t = log.records[i].state.t;
    if (t < 0.1) continue;
    const double bn = log.records[i].beta.norm();
    CHECK(bn <= prev + 1e-6);
    prev = bn;
  }
}

TEST_CASE("adaptive run keeps the estimate positive") {
  auto cfg = preset("pvtol_p1_adaptive");
  cfg.duration = 2.0;
  const Scenario sc = vfc::make_scenario(cfg);
  const TrajectoryLog log = run_scenario(sc);
  double min_alpha = std::numeric_limits<double>::infinity();
  for (const auto& rec : log.records)
    min_alpha = std::min(min_alpha, rec.state.alpha_hat.minCoeff());
  CHECK(min_alpha > 0.0);
}

TEST_CASE("halving the step shrinks the terminal error like h^4") {
  auto cfg = preset("pvtol_p1_nominal");
  cfg.duration = 0.5;
  auto terminal = [&cfg](double h) {
    auto c = cfg;
    c.step = h;
    const TrajectoryLog log = run_scenario(vfc::make_scenario(c));
    const auto& last = log.records.back();
    Eigen::VectorXd y(7);
    y << last.state.q, last.state.qdot, last.state.w;
    return y;
  };
  const Eigen::VectorXd ref = terminal(1e-3 / 8.0);
  const double err_h = (terminal(1e-3) - ref).norm();
  const double err_h2 = (terminal(5e-4) - ref).norm();
  const double ratio = err_h / err_h2;
  CHECK(ratio > 8.0);   // 16 +- 50%
  CHECK(ratio < 24.0);
}

TEST_CASE("manipulator adaptive run on an in-reach task path") {
  // The benchmark task paths sit outside the unit-link arm's reach, so the
  // full joint-space pipeline is exercised on a torus knot placed inside it.
  auto cfg = preset("manip_p5_adaptive");
  cfg.id = "manip_knot_demo";
  cfg.path_params.knot_R = 0.3;
  cfg.path_params.knot_r = 0.06;
  cfg.path_params.knot_cx = 0.0;
  cfg.path_params.knot_cy = 1.3;
  cfg.path_params.knot_cz = 0.5;
  cfg.q0 = {-0.1, 1.5, 1.5};
  cfg.qdot0 = {1.0, 0.0, 0.0};
  // Gains re-tuned for the small path scale: stiffer feedback, faster
  // adaptation, tighter dead zone.
  cfg.kappa = 20.0;
  cfg.l1 = 5.0;
  cfg.l2 = 0.05;
  cfg.eps_dz = 0.05;
  cfg.mu = 0.05;
  cfg.duration = 12.0;
  const Scenario sc = vfc::make_scenario(cfg);
  const TrajectoryLog log = run_scenario(sc);
  REQUIRE(log.records.size() == 12001);

  // The adaptive estimate stays positive and the joint-space constraint
  // error settles.
  double min_alpha = std::numeric_limits<double>::infinity();
  for (const auto& rec : log.records)
    min_alpha = std::min(min_alpha, rec.state.alpha_hat.minCoeff());
  CHECK(min_alpha > 0.0);

  double tail_beta = 0.0;
  for (size_t i = log.records.size() * 4 / 5; i < log.records.size(); ++i)
    tail_beta = std::max(tail_beta, log.records[i].beta.norm());
  CHECK(tail_beta < 0.5);

  // Task-space tail error: map the joints back through the arm and measure
  // the distance to the task path.
  const auto task = vfc::make_task_map(cfg);
  REQUIRE(task.has_value());
  vfc::TrajectoryLog tail = log;
  tail.records.assign(log.records.begin() + 9600, log.records.end());
  auto reseeded = *task;
  reseeded.seed0 =
      task->to_task(tail.records.front().state.q, task->seed0);
  const auto series = vfc::error_series(tail, sc.ctx, &reseeded, 800);
  CHECK(series.dist_phys.maxCoeff() < 0.2);
}

TEST_CASE("run_scenario validates inputs") {
  auto cfg = preset("pvtol_p1_nominal");
  Scenario sc = vfc::make_scenario(cfg);
  sc.step = 0.0;
  CHECK_THROWS_AS(run_scenario(sc), std::invalid_argument);

  Scenario sc2 = vfc::make_scenario(preset("pvtol_p1_adaptive"));
  sc2.alpha0 = Eigen::Vector2d(0.5, -0.5);
  CHECK_THROWS_AS(run_scenario(sc2), std::invalid_argument);
}

TEST_CASE("divergence is reported with its time") {
  // An absurd step size makes the closed loop blow up; the failure must name
  // the step at which the state left the finite range.
  auto cfg = preset("pvtol_p1_nominal");
  cfg.step = 10.0;
  cfg.duration = 1000.0;
  const Scenario sc = vfc::make_scenario(cfg);
  CHECK_THROWS_WITH_AS(run_scenario(sc), doctest::Contains("non-finite"),
                       std::runtime_error);
}
