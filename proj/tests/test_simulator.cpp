#include "mgdesign/simulator.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>

using namespace mgdesign;

namespace {

const std::filesystem::path kSource = MGDESIGN_SOURCE_DIR;
const MoiaParams kQuick{30, 120, 40, 9};

void check_record_invariants(const ScenarioConfig& cfg, const StepRecord& r) {
  CHECK(r.price >= cfg.price_min);
  CHECK(r.price <= cfg.price_max);
  CHECK(r.penalty == 0.0);
  NetworkState st;
  st.stored = r.stored;
  CHECK(constraint_penalty(st, cfg.microgrids, r.stored_next) == 0.0);
  for (Eigen::Index j = 0; j < r.stored_next.size(); ++j) {
    const auto& m = cfg.microgrids[static_cast<std::size_t>(j)];
    CHECK(r.stored_next[j] >= m.cap_secure);
    CHECK(r.stored_next[j] <= m.cap_max);
    CHECK(std::abs(r.stored_next[j] - r.stored[j]) <= m.rate_limit);
    CHECK(r.stored_next[j] == storage_step(r.stored[j], r.dispatch[j], r.demand[j], r.res_output[j]));
  }
  for (Eigen::Index j = r.stored_next.size(); j < r.dispatch.size(); ++j)
    CHECK(r.dispatch[j] - (r.demand[j] - r.res_output[j]) == 0.0);
}

}  // namespace

TEST_CASE("closed loop keeps every design feasible") {
  const auto cfg = load_scenario(kSource / "scenarios/small.json");
  const auto trace = simulate(cfg, kQuick);
  REQUIRE(trace.records.size() == cfg.horizon);
  Eigen::VectorXd stored = cfg.initial_stored();
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    CHECK(r.k == k);
    CHECK(r.stored == stored);
    check_record_invariants(cfg, r);
    stored = r.stored_next;
  }
  CHECK(trace.config_hash == scenario_hash(cfg));
  CHECK(trace.seed == kQuick.seed);
}

TEST_CASE("single-step horizon is one simulate_step") {
  auto cfg = reference_scenario();
  cfg.horizon = 1;
  const auto trace = simulate(cfg, kQuick);
  const auto step = simulate_step(cfg.initial_state(), cfg, kQuick, 0);
  REQUIRE(trace.records.size() == 1);
  CHECK(trace.records[0].price == step.record.price);
  CHECK(trace.records[0].dispatch == step.record.dispatch);
  CHECK(trace.records[0].stored_next == step.record.stored_next);
  CHECK(step.next.base_load == cfg.base_load.row(1).transpose());
  CHECK(step.next.stored == step.record.stored_next);
}

TEST_CASE("knee choice comes from the archive") {
  const auto cfg = reference_scenario();
  const auto step = simulate_step(cfg.initial_state(), cfg, kQuick, 5);
  REQUIRE_FALSE(step.record.fallback);
  REQUIRE(step.knee < step.solve.archive.size());
  const auto& chosen = step.solve.archive.entries[step.knee];
  CHECK(chosen.x[0] == step.record.price);
  CHECK(chosen.f[0] == -step.record.utility_microgrids);
  CHECK(chosen.f[1] == -step.record.utility_grid);
  CHECK(chosen.f[2] == -step.record.stored_total);
  CHECK(step.record.archive_size == step.solve.archive.size());
}

TEST_CASE("empty archive falls back to the balancing dispatch") {
  testing::SingleStorage s;
  s.rate = 0;  // only the exact balancing line is feasible
  auto cfg = testing::single_storage_scenario(s);
  cfg.horizon = 1;
  const auto step = simulate_step(cfg.initial_state(), cfg, kQuick, 0);
  CHECK(step.record.fallback);
  CHECK(step.record.archive_size == 0);
  CHECK(step.record.price == (cfg.price_min + cfg.price_max) / 2);
  CHECK(step.record.stored_next == step.record.stored);
  CHECK(step.record.penalty == 0.0);
}

TEST_CASE("zero elasticity and zero rate limit force a flat store") {
  testing::SingleStorage s;
  s.rate = 0;
  s.curve = {};
  s.base = 90;
  s.res = 35;
  const auto cfg = testing::single_storage_scenario(s);
  const auto step = simulate_step(cfg.initial_state(), cfg, kQuick, 0);
  CHECK_FALSE(step.record.fallback);
  CHECK(step.record.dispatch[0] == 55.0);
  CHECK(step.record.stored_next[0] == s.stored);
}

TEST_CASE("same seed, same trace") {
  auto cfg = reference_scenario();
  cfg.horizon = 4;
  const auto a = simulate(cfg, kQuick);
  const auto b = simulate(cfg, kQuick);
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].price == b.records[k].price);
    CHECK(a.records[k].dispatch == b.records[k].dispatch);
  }
  // Step outcomes do not depend on the horizon length.
  cfg.horizon = 2;
  const auto c = simulate(cfg, kQuick);
  CHECK(c.records[1].price == a.records[1].price);
}

TEST_CASE("invalid configuration is reported before the first step") {
  auto cfg = reference_scenario();
  cfg.horizon = 0;
  CHECK_THROWS_AS(simulate(cfg, kQuick), ScenarioError);
  cfg.horizon = 1000;
  CHECK_THROWS_AS(simulate(cfg, kQuick), ScenarioError);
}
