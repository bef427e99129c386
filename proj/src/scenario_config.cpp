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

#include "vfc/scenario_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace vfc {

namespace {

using json = nlohmann::ordered_json;

json vec_to_json(const std::vector<double>& v) { return json(v); }

std::vector<double> json_to_vec(const json& j, const std::string& field) {
  if (!j.is_array())
    throw std::invalid_argument("config field '" + field + "' must be an array");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number())
      throw std::invalid_argument("config field '" + field +
                                  "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

const json& require(const json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end())
    throw std::invalid_argument("config is missing field '" + field + "'");
  return *it;
}

double number(const json& j, const std::string& field, double fallback) {
  auto it = j.find(field);
  if (it == j.end()) return fallback;
  if (!it->is_number())
    throw std::invalid_argument("config field '" + field +
                                "' must be a number");
  return it->get<double>();
}

std::string text(const json& j, const std::string& field,
                 const std::string& fallback) {
  auto it = j.find(field);
  if (it == j.end()) return fallback;
  if (!it->is_string())
    throw std::invalid_argument("config field '" + field +
                                "' must be a string");
  return it->get<std::string>();
}

}  // namespace

std::string to_json_text(const ScenarioConfig& c) {
  json j;
  j["id"] = c.id;
  json plant;
  plant["name"] = c.plant;
  if (c.plant == "pvtol") {
    plant["m_bar"] = c.pvtol_m_bar;
    plant["J_bar"] = c.pvtol_J_bar;
    plant["g0"] = c.pvtol_g0;
  } else {
    plant["l1"] = c.geom.l1;
    plant["l2"] = c.geom.l2;
    plant["J_bar"] = c.geom.J_bar;
    plant["m2_bar"] = c.geom.m2_bar;
    plant["m3_bar"] = c.geom.m3_bar;
    plant["g0"] = c.geom.g0;
  }
  j["plant"] = plant;

  json path;
  path["name"] = c.path;
  if (c.path == "cassini") {
    path["ra"] = c.path_params.ra;
    path["rb"] = c.path_params.rb;
  } else if (c.path == "cylinder_intersection") {
    path["R1"] = c.path_params.R1;
    path["R2"] = c.path_params.R2;
    path["xc"] = c.path_params.xc;
    path["yc"] = c.path_params.yc;
    path["zc"] = c.path_params.zc;
  } else if (c.path == "torus_knot") {
    path["R"] = c.path_params.knot_R;
    path["r"] = c.path_params.knot_r;
    path["cx"] = c.path_params.knot_cx;
    path["cy"] = c.path_params.knot_cy;
    path["cz"] = c.path_params.knot_cz;
  }
  j["path"] = path;

  j["constraint"] = c.constraint;
  json ctrl;
  ctrl["kind"] = c.controller;
  ctrl["kappa"] = c.kappa;
  ctrl["mu"] = c.mu;
  ctrl["l1"] = c.l1;
  ctrl["l2"] = c.l2;
  ctrl["eps_dz"] = c.eps_dz;
  j["controller"] = ctrl;
  j["plant_mode"] = c.plant_mode;
  j["gvf_gains"] = vec_to_json(c.gvf_gains);
  j["P_diag"] = vec_to_json(c.P_diag);

  json init;
  init["q"] = vec_to_json(c.q0);
  init["qdot"] = vec_to_json(c.qdot0);
  init["w"] = c.w0;
  init["alpha_hat"] = vec_to_json(c.alpha0);
  j["initial"] = init;

  j["duration"] = c.duration;
  j["step"] = c.step;
  j["out_dir"] = c.out_dir;
  return j.dump(2) + "\n";
}

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  ScenarioConfig c;
  c.id = text(j, "id", "");
  if (c.id.empty()) throw std::invalid_argument("config field 'id' is required");

  const json& plant = require(j, "plant");
  c.plant = text(plant, "name", "");
  if (c.plant == "pvtol") {
    c.pvtol_m_bar = number(plant, "m_bar", c.pvtol_m_bar);
    c.pvtol_J_bar = number(plant, "J_bar", c.pvtol_J_bar);
    c.pvtol_g0 = number(plant, "g0", c.pvtol_g0);
  } else if (c.plant == "manipulator") {
    c.geom.l1 = number(plant, "l1", c.geom.l1);
    c.geom.l2 = number(plant, "l2", c.geom.l2);
    c.geom.J_bar = number(plant, "J_bar", c.geom.J_bar);
    c.geom.m2_bar = number(plant, "m2_bar", c.geom.m2_bar);
    c.geom.m3_bar = number(plant, "m3_bar", c.geom.m3_bar);
    c.geom.g0 = number(plant, "g0", c.geom.g0);
  } else {
    throw std::invalid_argument("config field 'plant.name' must be 'pvtol' or "
                                "'manipulator', got '" +
                                c.plant + "'");
  }

  const json& path = require(j, "path");
  c.path = text(path, "name", "");
  c.path_params.ra = number(path, "ra", c.path_params.ra);
  c.path_params.rb = number(path, "rb", c.path_params.rb);
  c.path_params.R1 = number(path, "R1", c.path_params.R1);
  c.path_params.R2 = number(path, "R2", c.path_params.R2);
  c.path_params.xc = number(path, "xc", c.path_params.xc);
  c.path_params.yc = number(path, "yc", c.path_params.yc);
  c.path_params.zc = number(path, "zc", c.path_params.zc);
  c.path_params.knot_R = number(path, "R", c.path_params.knot_R);
  c.path_params.knot_r = number(path, "r", c.path_params.knot_r);
  c.path_params.knot_cx = number(path, "cx", c.path_params.knot_cx);
  c.path_params.knot_cy = number(path, "cy", c.path_params.knot_cy);
  c.path_params.knot_cz = number(path, "cz", c.path_params.knot_cz);

  c.constraint = text(j, "constraint", "vfc");
  if (j.contains("controller")) {
    const json& ctrl = j["controller"];
    c.controller = text(ctrl, "kind", c.controller);
    c.kappa = number(ctrl, "kappa", c.kappa);
    c.mu = number(ctrl, "mu", c.mu);
    c.l1 = number(ctrl, "l1", c.l1);
    c.l2 = number(ctrl, "l2", c.l2);
    c.eps_dz = number(ctrl, "eps_dz", c.eps_dz);
  }
  c.plant_mode = text(j, "plant_mode", c.plant_mode);
  if (j.contains("gvf_gains")) c.gvf_gains = json_to_vec(j["gvf_gains"], "gvf_gains");
  if (j.contains("P_diag")) c.P_diag = json_to_vec(j["P_diag"], "P_diag");

  if (j.contains("initial")) {
    const json& init = j["initial"];
    if (init.contains("q")) c.q0 = json_to_vec(init["q"], "initial.q");
    if (init.contains("qdot")) c.qdot0 = json_to_vec(init["qdot"], "initial.qdot");
    c.w0 = number(init, "w", c.w0);
    if (init.contains("alpha_hat"))
      c.alpha0 = json_to_vec(init["alpha_hat"], "initial.alpha_hat");
  }
  c.duration = number(j, "duration", c.duration);
  c.step = number(j, "step", c.step);
  c.out_dir = text(j, "out_dir", c.out_dir);
  return c;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
  };
  if (c.id.empty()) fail("'id' must be non-empty");
  if (c.plant != "pvtol" && c.plant != "manipulator")
    fail("'plant.name' must be 'pvtol' or 'manipulator'");
  const auto& names = builtin_path_names();
  if (std::find(names.begin(), names.end(), c.path) == names.end()) {
    std::string known;
    for (const auto& n : names) known += " " + n;
    fail("'path.name' unknown: '" + c.path + "'; catalog:" + known);
  }
  if (c.constraint != "vfc" && c.constraint != "ccfc")
    fail("'constraint' must be 'vfc' or 'ccfc'");
  if (c.controller != "nominal" && c.controller != "adaptive_robust")
    fail("'controller.kind' must be 'nominal' or 'adaptive_robust'");
  if (c.plant_mode != "nominal" && c.plant_mode != "true")
    fail("'plant_mode' must be 'nominal' or 'true'");
  const bool planar = (c.plant == "pvtol");
  const size_t m = planar ? 2 : 3;
  if (c.gvf_gains.size() != m) fail("'gvf_gains' must have m entries");
  for (double g : c.gvf_gains)
    if (!(g > 0.0)) fail("'gvf_gains' entries must be positive");
  if (c.P_diag.size() != m) fail("'P_diag' must have m entries");
  for (double p : c.P_diag)
    if (!(p > 0.0)) fail("'P_diag' entries must be positive");
  if (c.q0.size() != 3 || c.qdot0.size() != 3)
    fail("'initial.q' and 'initial.qdot' must have 3 entries");
  if (!(c.kappa > 0) || !(c.mu > 0) || !(c.l1 > 0) || !(c.l2 > 0) ||
      !(c.eps_dz > 0))
    fail("'controller' gains must be positive");
  if (c.controller == "adaptive_robust") {
    const size_t k = planar ? 2 : 1;
    if (c.alpha0.size() != k)
      fail("'initial.alpha_hat' must have " + std::to_string(k) +
           " positive entries for this plant");
    for (double a : c.alpha0)
      if (!(a > 0.0)) fail("'initial.alpha_hat' entries must be positive");
  }
  if (!(c.step > 0.0)) fail("'step' must be positive");
  if (c.duration < 0.0) fail("'duration' must be non-negative");
  if (planar) {
    if (!(c.pvtol_m_bar > 0) || !(c.pvtol_J_bar > 0) || !(c.pvtol_g0 > 0))
      fail("'plant' parameters must be positive");
    if (c.path == "cylinder_intersection" || c.path == "torus_knot")
      fail("'path.name' is 3-D but the pvtol follows planar paths");
  } else {
    if (c.path != "cylinder_intersection" && c.path != "torus_knot")
      fail("'path.name' must be 3-D for the manipulator");
  }
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "pvtol_p1_nominal",          "pvtol_p2_nominal",
      "pvtol_p3_nominal",          "pvtol_p1_adaptive",
      "pvtol_p2_adaptive",         "pvtol_p3_adaptive",
      "pvtol_p3_uncertain_nominal", "manip_p4_adaptive",
      "manip_p5_adaptive",         "ccfc_demo"};
  return names;
}

namespace {

ScenarioConfig pvtol_base() {
  ScenarioConfig c;
  c.plant = "pvtol";
  c.gvf_gains = {1.0, 1.0};
  c.P_diag = {1.0, 1.0};
  c.q0 = {2.2, 0.2, 1.5};
  c.qdot0 = {1.0, 0.0, 0.0};
  c.w0 = 0.1;
  c.kappa = 5.0;
  c.mu = 0.1;
  c.l1 = 0.5;
  c.l2 = 0.1;
  c.eps_dz = 1.0;
  return c;
}

ScenarioConfig manip_base() {
  ScenarioConfig c;
  c.plant = "manipulator";
  c.gvf_gains = {1.0, 1.0, 1.0};
  c.P_diag = {1.0, 1.0, 1.0};
  c.q0 = {-0.1, 1.5, 1.5};
  c.qdot0 = {1.0, 0.0, 0.0};
  c.w0 = 0.0;
  c.kappa = 5.0;
  c.mu = 0.1;
  c.l1 = 0.5;
  c.l2 = 0.3;
  c.eps_dz = 1.0;
  c.controller = "adaptive_robust";
  c.plant_mode = "true";
  c.alpha0 = {0.5};
  return c;
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c;
  if (name == "pvtol_p1_nominal" || name == "pvtol_p2_nominal" ||
      name == "pvtol_p3_nominal") {
    c = pvtol_base();
    c.controller = "nominal";
    c.plant_mode = "nominal";
  } else if (name == "pvtol_p1_adaptive" || name == "pvtol_p2_adaptive" ||
             name == "pvtol_p3_adaptive") {
    c = pvtol_base();
    c.controller = "adaptive_robust";
    c.plant_mode = "true";
    c.alpha0 = {0.5, 0.5};
  } else if (name == "pvtol_p3_uncertain_nominal") {
    // The comparison run: nominal controller left to face the uncertain plant.
    c = pvtol_base();
    c.controller = "nominal";
    c.plant_mode = "true";
  } else if (name == "manip_p4_adaptive") {
    c = manip_base();
    c.path = "cylinder_intersection";
  } else if (name == "manip_p5_adaptive") {
    c = manip_base();
    c.path = "torus_knot";
  } else if (name == "ccfc_demo") {
    c = pvtol_base();
    c.constraint = "ccfc";
    c.path = "cassini";
    c.controller = "nominal";
    c.plant_mode = "nominal";
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += " " + n;
    throw std::invalid_argument("unknown preset '" + name + "'; known:" + known);
  }
  c.id = name;
  if (name.find("_p1_") != std::string::npos) c.path = "sinusoid";
  if (name.find("_p2_") != std::string::npos) c.path = "cassini";
  if (name.find("_p3_") != std::string::npos ||
      name == "pvtol_p3_uncertain_nominal")
    c.path = "lemniscate";
  validate(c);
  return c;
}

MechanicalSystem make_plant(const ScenarioConfig& c) {
  if (c.plant == "pvtol") {
    PvtolParams p = pvtol_benchmark_params();
    p.m_bar = c.pvtol_m_bar;
    p.J_bar = c.pvtol_J_bar;
    p.g0 = c.pvtol_g0;
    p.dm = sine_signal(0.3 * p.m_bar, 5.0);
    p.dJ = sine_signal(0.3 * p.J_bar, 7.5);
    return pvtol(p);
  }
  return manipulator(c.geom, manipulator_benchmark_uncertainty(c.geom));
}

VfcContext make_context_with(const ScenarioConfig& c, ParametricPath path) {
  const bool planar = (c.plant == "pvtol");
  const int m = path.dim_m();
  SelectionMatrix A = planar ? make_selection_matrix({1, 2}, 3)
                             : make_selection_matrix({1, 2, 3}, 3);
  Eigen::VectorXd k(m), pd(m);
  for (int i = 0; i < m; ++i) {
    k(i) = c.gvf_gains[static_cast<size_t>(i)];
    pd(i) = c.P_diag[static_cast<size_t>(i)];
  }
  return VfcContext(std::move(A), std::move(path), GvfGains(k),
                    Eigen::MatrixXd(pd.asDiagonal()));
}

VfcContext make_context(const ScenarioConfig& c) {
  ParametricPath path = builtin_path(c.path, c.path_params);
  if (c.plant != "pvtol") path = joint_path_from_task(path, c.geom);
  return make_context_with(c, std::move(path));
}

Scenario make_scenario(const ScenarioConfig& c) {
  validate(c);
  const bool planar = (c.plant == "pvtol");
  if (c.constraint == "ccfc")
    throw std::invalid_argument(
        "make_scenario: the ccfc constraint is only used by the feasibility "
        "demonstration (check-assumptions), not for closed-loop runs");

  MechanicalSystem sys = make_plant(c);
  VfcContext ctx = make_context(c);
  BoundFunction bound = planar ? pvtol_pi(sys, ctx) : manipulator_pi();
  Eigen::VectorXd alpha0(c.alpha0.size());
  for (size_t i = 0; i < c.alpha0.size(); ++i)
    alpha0(static_cast<Eigen::Index>(i)) = c.alpha0[i];

  return Scenario{c.id,
                  std::move(sys),
                  std::move(ctx),
                  ControllerConfig{c.kappa, c.mu, c.l1, c.l2, c.eps_dz},
                  std::move(bound),
                  c.controller == "nominal" ? ControllerKind::Nominal
                                            : ControllerKind::AdaptiveRobust,
                  c.plant_mode == "nominal" ? PlantMode::Nominal
                                            : PlantMode::True,
                  Eigen::Vector3d(c.q0[0], c.q0[1], c.q0[2]),
                  Eigen::Vector3d(c.qdot0[0], c.qdot0[1], c.qdot0[2]),
                  c.w0,
                  std::move(alpha0),
                  c.duration,
                  c.step};
}

std::optional<TaskSpaceMap> make_task_map(const ScenarioConfig& c) {
  if (c.plant != "manipulator") return std::nullopt;
  const ParametricPath task_path = builtin_path(c.path, c.path_params);
  const ManipulatorGeometry geom = c.geom;
  TaskSpaceMap map{.to_task =
                       [geom](const Eigen::VectorXd& q,
                              const Eigen::Vector3d& seed) {
                         return fk(Eigen::Vector3d(q(0), q(1), q(2)), geom,
                                   seed);
                       },
                   .task_path = task_path,
                   .seed0 = Eigen::Vector3d::Zero()};
  Eigen::VectorXd p0 = task_path.eval(c.w0);
  map.seed0 = Eigen::Vector3d(p0(0), p0(1), p0(2));
  return map;
}

}  // namespace vfc
