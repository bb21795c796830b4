#pragma once

#include "mgdesign/model.hpp"
#include "mgdesign/random.hpp"
#include "mgdesign/scenario.hpp"

#include <vector>

namespace mgdesign::testing {

struct SingleStorage {
  double stored = 187.5;
  double base = 100;
  double res = 30;
  DemandCurve curve{0.01, -0.12, 0.26};
  double rate = 25;
  double secure = 125;
  double cap = 250;
  double omega = 10;
  double alpha = 0.05;
  GridCost cost{0.01, 0.1, 1.0};
};

/// One storage microgrid, one step.
inline ScenarioConfig single_storage_scenario(const SingleStorage& s) {
  ScenarioConfig cfg;
  cfg.name = "single-storage";
  cfg.alpha = s.alpha;
  cfg.grid_cost = {s.cost};
  cfg.price_min = 1.5;
  cfg.price_max = 5.5;
  cfg.horizon = 1;
  MicrogridSpec m;
  m.id = 1;
  m.has_storage = true;
  m.cap_max = s.cap;
  m.cap_secure = s.secure;
  m.rate_limit = s.rate;
  m.initial_stored = s.stored;
  m.demand_curve = s.curve;
  m.omega = s.omega;
  cfg.microgrids = {m};
  cfg.base_load = Eigen::MatrixXd::Constant(1, 1, s.base);
  cfg.res_output = Eigen::MatrixXd::Constant(1, 1, s.res);
  return cfg;
}

/// The oracle instances: a mid-level store, one close to its secure floor
/// and one close to capacity, with different demand curves.
inline std::vector<ScenarioConfig> oracle_instances() {
  SingleStorage mid;
  SingleStorage low;
  low.stored = 130;
  low.base = 80;
  low.res = 20;
  low.curve = {-0.01, 0.0, 0.13};
  low.omega = 8;
  SingleStorage high;
  high.stored = 240;
  high.base = 60;
  high.res = 50;
  high.curve = {-0.01, 0.02, 0.08};
  high.rate = 20;
  high.secure = 100;
  high.omega = 12;
  high.cost = {0.02, 0.5, 2.0};
  return {single_storage_scenario(mid), single_storage_scenario(low), single_storage_scenario(high)};
}

/// Random network state for `cfg` with storage levels anywhere in
/// [0.8 secure, 1.1 cap] (including infeasible ones) unless `inside` is set.
inline NetworkState random_state(const ScenarioConfig& cfg, RandomStream& rng, bool inside = false) {
  NetworkState st;
  const auto n = static_cast<Eigen::Index>(cfg.size());
  const auto ns = static_cast<Eigen::Index>(cfg.storage_count());
  st.stored.resize(ns);
  st.base_load.resize(n);
  st.res_output.resize(n);
  for (Eigen::Index j = 0; j < ns; ++j) {
    const auto& m = cfg.microgrids[static_cast<std::size_t>(j)];
    st.stored[j] = inside ? rng.uniform(m.cap_secure, m.cap_max) : rng.uniform(0.8 * m.cap_secure, 1.1 * m.cap_max);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    st.base_load[j] = rng.uniform(20, 200);
    st.res_output[j] = rng.uniform(1, 100);
  }
  return st;
}

}  // namespace mgdesign::testing
