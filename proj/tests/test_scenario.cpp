#include "mgdesign/scenario.hpp"

#include <doctest.h>

#include <filesystem>

using namespace mgdesign;

namespace {

const std::filesystem::path kSource = MGDESIGN_SOURCE_DIR;

std::string minimal_with(const std::string& microgrids, const std::string& extra = "") {
  return R"({"alpha": 0.5, "price_bounds": [1.5, 5.5], "horizon": 2,
             "grid_cost": {"a": 0.01, "b": 0.1, "c": 1},
             "microgrids": )" +
         microgrids + R"(, "profiles": {"base_load": [[100, 50], [90, 40]], "res_output": [[10, 5], [12, 6]]})" +
         extra + "}";
}

const std::string kTwo =
    R"([{"demand_curve": [0.01, -0.12, 0.26], "omega": 2, "storage": {"cap_max": 250, "cap_secure": 125, "rate_limit": 25}},
        {"demand_curve": [0, 0, 0], "omega": 3}])";

}  // namespace

TEST_CASE("bundled reference scenario matches the built-in one") {
  const auto file = load_scenario(kSource / "scenarios/reference.json");
  const auto builtin = reference_scenario();
  CHECK(scenario_to_json(file) == scenario_to_json(builtin));
  CHECK(file.size() == 3);
  CHECK(file.storage_count() == 2);
  CHECK(file.microgrids[0].cap_max == 250);
  CHECK(file.microgrids[1].cap_secure == 100);
  CHECK(file.microgrids[0].rate_limit == doctest::Approx(0.1 * 250));
  CHECK(file.microgrids[1].rate_limit == doctest::Approx(0.1 * 200));
  CHECK(file.price_min == 1.5);
  CHECK(file.price_max == 5.5);
  CHECK(file.solver->n_nom == 80);
  CHECK(file.solver->n_max == 320);
  CHECK(file.solver->t_max == 200);
  CHECK(file.initial_stored() == Eigen::Vector2d(187.5, 150));
}

TEST_CASE("canonical form reparses to the same scenario") {
  const auto cfg = reference_scenario(123);
  const auto again = parse_scenario(scenario_to_json(cfg));
  CHECK(scenario_hash(again) == scenario_hash(cfg));
  CHECK(again.base_load == cfg.base_load);
  CHECK(scenario_hash(reference_scenario(124)) != scenario_hash(cfg));
}

TEST_CASE("minimal scenario parses with defaults") {
  const auto cfg = parse_scenario(minimal_with(kTwo));
  CHECK(cfg.size() == 2);
  CHECK(cfg.storage_count() == 1);
  CHECK(cfg.microgrids[0].id == 1);
  CHECK(cfg.microgrids[1].id == 2);
  CHECK(cfg.utility_cap == UtilityCap::Continuous);
  CHECK(cfg.grid_cost.size() == 1);
  CHECK(cfg.grid_cost_at(1).a == 0.01);
  CHECK_FALSE(cfg.solver.has_value());
  const auto st = cfg.state_at(1, cfg.initial_stored());
  CHECK(st.base_load == Eigen::Vector2d(90, 40));
  CHECK(st.res_output == Eigen::Vector2d(12, 6));
}

TEST_CASE("schema violations are rejected") {
  const std::string storage_last =
      R"([{"demand_curve": [0, 0, 0], "omega": 3},
          {"demand_curve": [0, 0, 0], "omega": 2, "storage": {"cap_max": 250, "cap_secure": 125, "rate_limit": 25}}])";
  CHECK_THROWS_AS(parse_scenario(minimal_with(storage_last)), ScenarioError);

  const std::string inverted =
      R"([{"demand_curve": [0, 0, 0], "omega": 2, "storage": {"cap_max": 100, "cap_secure": 125, "rate_limit": 25}},
          {"demand_curve": [0, 0, 0], "omega": 3}])";
  CHECK_THROWS_AS(parse_scenario(minimal_with(inverted)), ScenarioError);

  const std::string bad_initial =
      R"([{"demand_curve": [0, 0, 0], "omega": 2, "storage": {"cap_max": 250, "cap_secure": 125, "rate_limit": 25, "initial": 90}},
          {"demand_curve": [0, 0, 0], "omega": 3}])";
  CHECK_THROWS_AS(parse_scenario(minimal_with(bad_initial)), ScenarioError);

  CHECK_THROWS_AS(parse_scenario(minimal_with(kTwo, R"(, "utility_cap": "linear")")), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("{not json"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(R"({"alpha": 0.5})"), ScenarioError);

  auto cfg = parse_scenario(minimal_with(kTwo));
  cfg.horizon = 3;
  CHECK_THROWS_AS(cfg.validate(), ScenarioError);
  cfg.horizon = 0;
  CHECK_THROWS_AS(cfg.validate(), ScenarioError);
  cfg.horizon = 2;
  cfg.alpha = 0;
  CHECK_THROWS_AS(cfg.validate(), ScenarioError);
  cfg.alpha = 0.5;
  cfg.price_min = 6;
  CHECK_THROWS_AS(cfg.validate(), ScenarioError);
  cfg.price_min = 1.5;
  cfg.res_output(1, 1) = 0;
  CHECK_THROWS_AS(cfg.validate(), ScenarioError);
  cfg.res_output(1, 1) = 6;
  cfg.grid_cost = {GridCost{-1, 0, 0}};
  CHECK_THROWS_AS(cfg.validate(), ScenarioError);
  cfg.grid_cost = {GridCost{}, GridCost{}, GridCost{}};
  CHECK_NOTHROW(cfg.validate());
  cfg.solver = MoiaParams{100, 50, 10, 1};
  CHECK_THROWS_AS(cfg.validate(), ScenarioError);
}

TEST_CASE("synthetic profiles") {
  SyntheticProfile spec;
  spec.steps = 72;
  spec.base_mean = {120, 90};
  spec.base_amplitude = {0.3, 0.5};
  spec.res_peak = {60, 45};
  spec.res_floor = {0.5, 1};
  spec.noise = 0.2;
  const auto a = synthesize_profiles(spec);
  const auto b = synthesize_profiles(spec);
  CHECK(a.base_load == b.base_load);
  CHECK(a.res_output == b.res_output);
  CHECK((a.base_load.array() > 0).all());
  CHECK((a.res_output.array() > 0).all());
  CHECK(a.base_load.rows() == 72);
  // Midday renewable output beats midnight output.
  CHECK(a.res_output(12, 0) > a.res_output(0, 0));
  spec.seed = 8;
  CHECK(synthesize_profiles(spec).base_load != a.base_load);
  spec.res_peak = {1};
  CHECK_THROWS_AS(synthesize_profiles(spec), ScenarioError);
}

TEST_CASE("profiles from a CSV file") {
  const auto p = read_profiles_csv(kSource / "tests/data/profiles.csv", 2);
  CHECK(p.base_load.rows() == 4);
  CHECK(p.base_load(2, 0) == 120);
  CHECK(p.res_output(3, 1) == 11);
  CHECK_THROWS_AS(read_profiles_csv(kSource / "tests/data/profiles.csv", 3), ScenarioError);
  CHECK_THROWS_AS(read_profiles_csv(kSource / "tests/data/missing.csv", 2), ScenarioError);

  const std::string text = R"({"alpha": 0.5, "price_bounds": [1.5, 5.5], "horizon": 4,
      "grid_cost": {"a": 0.01, "b": 0.1, "c": 1}, "microgrids": )" +
                           kTwo + R"(, "profiles": {"file": "profiles.csv"}})";
  const auto cfg = parse_scenario(text, kSource / "tests/data");
  CHECK(cfg.base_load(3, 1) == 65);
}
