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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "vfc/report.hpp"

using vfc::parse_config;
using vfc::preset;
using vfc::preset_names;
using vfc::ScenarioConfig;
using vfc::to_json_text;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VFC_CLI_PATH) + " " + args;
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("config round-trips through json") {
  for (const auto& name : preset_names()) {
    const ScenarioConfig a = preset(name);
    const ScenarioConfig b = parse_config(to_json_text(a));
    CHECK(to_json_text(a) == to_json_text(b));
    CHECK(a.id == b.id);
    CHECK(a.path == b.path);
    CHECK(a.controller == b.controller);
    CHECK(a.q0 == b.q0);
    CHECK(a.step == b.step);
  }
}

TEST_CASE("config accepts comments") {
  const std::string text = R"({
    // benchmark sinusoid run
    "id": "commented",
    "plant": {"name": "pvtol"},
    "path": {"name": "sinusoid"},
    /* gains left at defaults */
    "duration": 1.0
  })";
  const ScenarioConfig c = parse_config(text);
  CHECK(c.id == "commented");
  CHECK(c.duration == 1.0);
  CHECK(c.plant == "pvtol");
}

TEST_CASE("config diagnostics name the offending field") {
  CHECK_THROWS_WITH_AS(parse_config("{\"id\": \"x\"}"),
                       doctest::Contains("plant"), std::invalid_argument);
  // Unknown catalog names are a validation failure, past parsing.
  const ScenarioConfig ring = parse_config(
      R"({"id":"x","plant":{"name":"pvtol"},"path":{"name":"ring"}})");
  CHECK_THROWS_WITH_AS(vfc::validate(ring), doctest::Contains("catalog"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("not json at all"),
                       doctest::Contains("parse error"), std::invalid_argument);

  ScenarioConfig bad = preset("pvtol_p1_nominal");
  bad.gvf_gains = {1.0, -1.0};
  CHECK_THROWS_WITH_AS(vfc::validate(bad), doctest::Contains("gvf_gains"),
                       std::invalid_argument);
  ScenarioConfig bad2 = preset("pvtol_p1_nominal");
  bad2.path = "torus_knot";
  CHECK_THROWS_AS(vfc::validate(bad2), std::invalid_argument);
}

TEST_CASE("preset catalog is complete") {
  const auto& names = preset_names();
  // One preset per benchmark experiment plus the feasibility demo.
  CHECK(names.size() == 10);
  for (const auto& name : names) CHECK_NOTHROW(preset(name));
  CHECK_THROWS_AS(preset("pvtol_p9"), std::invalid_argument);

  const ScenarioConfig p2 = preset("pvtol_p2_adaptive");
  CHECK(p2.path == "cassini");
  CHECK(p2.plant_mode == "true");
  CHECK(p2.alpha0.size() == 2);

  const ScenarioConfig m5 = preset("manip_p5_adaptive");
  CHECK(m5.path == "torus_knot");
  CHECK(m5.l2 == 0.3);
  CHECK(m5.w0 == 0.0);
}

TEST_CASE("csv layout and determinism") {
  auto cfg = preset("pvtol_p1_nominal");
  cfg.duration = 0.5;
  const auto sc = vfc::make_scenario(cfg);

  auto render = [&]() {
    const auto log = vfc::run_scenario(sc);
    const auto series = vfc::error_series(log, sc.ctx, nullptr, 400);
    return vfc::trajectory_csv(log, series);
  };
  const std::string csv1 = render();
  const std::string csv2 = render();
  CHECK(csv1 == csv2);  // byte-identical reruns

  // Header and row count: T/h + 1 data rows behind one header line.
  std::istringstream is(csv1);
  std::string header;
  std::getline(is, header);
  CHECK(header ==
        "t,q1,q2,q3,qd1,qd2,qd3,w,tau1,tau2,beta_norm,phi_norm,dist_hgh,"
        "dist_phys");
  int rows = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 501);

  // Digits: every numeric field carries at least 12 significant digits.
  const size_t first_comma = csv1.find('\n') + 1;
  const std::string first_field =
      csv1.substr(first_comma, csv1.find(',', first_comma) - first_comma);
  CHECK(first_field.size() >= 13);
}

TEST_CASE("cli end to end") {
  namespace fs = std::filesystem;
  const fs::path out = fs::temp_directory_path() / "vfc_cli_test";
  fs::remove_all(out);

  // Short preset run writes the three artifacts and reports success.
  const int rc = run_cli("run --preset pvtol_p1_nominal --duration 0.4 "
                         "--out-dir " + out.string() + " > /dev/null");
  CHECK(rc == 0);
  CHECK(fs::exists(out / "pvtol_p1_nominal_trajectory.csv"));
  CHECK(fs::exists(out / "pvtol_p1_nominal_metrics.json"));
  CHECK(fs::exists(out / "pvtol_p1_nominal_path.svg"));
  const std::string csv = slurp(out / "pvtol_p1_nominal_trajectory.csv");
  CHECK(csv.find("beta_norm") != std::string::npos);
  const std::string svg = slurp(out / "pvtol_p1_nominal_path.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  // Unknown preset and malformed config exit nonzero.
  CHECK(run_cli("run --preset does_not_exist 2> /dev/null") != 0);
  const fs::path bad = out / "bad.json";
  {
    std::ofstream f(bad);
    f << "{ definitely not json";
  }
  CHECK(run_cli("run --config " + bad.string() + " 2> /dev/null") != 0);

  // A config file with comments loads through the same path the CLI uses.
  const fs::path good = out / "good.json";
  {
    std::ofstream f(good);
    f << "{\n  // short smoke run\n  \"id\": \"smoke\",\n"
         "  \"plant\": {\"name\": \"pvtol\"},\n"
         "  \"path\": {\"name\": \"lemniscate\"},\n"
         "  \"duration\": 0.2,\n  \"out_dir\": \"" << out.string() << "\"\n}\n";
  }
  CHECK(run_cli("run --config " + good.string() + " > /dev/null") == 0);
  CHECK(fs::exists(out / "smoke_trajectory.csv"));

  // list-presets names every bundled scenario.
  CHECK(run_cli("list-presets > " + (out / "presets.txt").string()) == 0);
  const std::string presets = slurp(out / "presets.txt");
  for (const auto& name : preset_names())
    CHECK(presets.find(name) != std::string::npos);

  // The feasibility demo exits nonzero (the constraint design fails).
  CHECK(run_cli("check-assumptions --preset ccfc_demo > " +
                (out / "ccfc.txt").string()) != 0);
  const std::string ccfc = slurp(out / "ccfc.txt");
  CHECK(ccfc.find("INFEASIBLE") != std::string::npos);

  // The benchmark scenarios' certificates pass; the manipulator one falls
  // back to an in-reach probe path and says so.
  CHECK(run_cli("check-assumptions --preset pvtol_p1_nominal --grid 12 > " +
                (out / "check.txt").string()) == 0);
  const std::string check = slurp(out / "check.txt");
  CHECK(check.find("all certificates pass") != std::string::npos);
  CHECK(run_cli("check-assumptions --preset manip_p5_adaptive --grid 10 > " +
                (out / "check_manip.txt").string()) == 0);
  const std::string check_m = slurp(out / "check_manip.txt");
  CHECK(check_m.find("probe path") != std::string::npos);
  CHECK(check_m.find("all certificates pass") != std::string::npos);

  fs::remove_all(out);
}

TEST_CASE("metrics json carries the bound set for adaptive runs") {
  auto cfg = preset("pvtol_p1_adaptive");
  cfg.duration = 0.5;
  const auto sc = vfc::make_scenario(cfg);
  const auto log = vfc::run_scenario(sc);
  const auto series = vfc::error_series(log, sc.ctx, nullptr, 400);
  const std::string text =
      vfc::metrics_json(cfg, log, series, 1.0, 1.0 / 1.3 - 1.0);
  CHECK(text.find("uub_with_terminal_alpha") != std::string::npos);
  CHECK(text.find("dbar") != std::string::npos);
  CHECK(text.find("ultimate_bound_est") != std::string::npos);
}
