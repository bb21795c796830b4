#include "mgdesign/scenario.hpp"
#include "mgdesign/random.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mgdesign {

using nlohmann::json;

std::size_t ScenarioConfig::storage_count() const {
  return static_cast<std::size_t>(
      std::count_if(microgrids.begin(), microgrids.end(), [](const MicrogridSpec& m) { return m.has_storage; }));
}

const GridCost& ScenarioConfig::grid_cost_at(std::size_t step) const {
  if (grid_cost.empty()) throw ScenarioError("grid_cost schedule is empty");
  return grid_cost.size() == 1 ? grid_cost.front() : grid_cost.at(step);
}

Eigen::VectorXd ScenarioConfig::omegas() const {
  Eigen::VectorXd w(static_cast<Eigen::Index>(microgrids.size()));
  for (std::size_t n = 0; n < microgrids.size(); ++n) w[static_cast<Eigen::Index>(n)] = microgrids[n].omega;
  return w;
}

Eigen::VectorXd ScenarioConfig::initial_stored() const {
  Eigen::VectorXd s(static_cast<Eigen::Index>(storage_count()));
  for (Eigen::Index n = 0; n < s.size(); ++n) {
    const auto& m = microgrids[static_cast<std::size_t>(n)];
    s[n] = m.initial_stored.value_or((m.cap_secure + m.cap_max) / 2);
  }
  return s;
}

NetworkState ScenarioConfig::state_at(std::size_t step, const Eigen::VectorXd& stored) const {
  const auto row = static_cast<Eigen::Index>(step);
  if (row >= base_load.rows() || row >= res_output.rows())
    throw ScenarioError("profile has no row for step " + std::to_string(step));
  NetworkState state;
  state.stored = stored;
  state.base_load = base_load.row(row).transpose();
  state.res_output = res_output.row(row).transpose();
  return state;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw ScenarioError(what); };
  if (microgrids.empty()) fail("at least one microgrid is required");
  bool seen_plain = false;
  for (const auto& m : microgrids) {
    if (m.has_storage) {
      if (seen_plain) fail("storage microgrids must be listed before microgrids without storage");
      if (!(m.cap_secure > 0) || !(m.cap_secure <= m.cap_max))
        fail("microgrid " + std::to_string(m.id) + ": require 0 < cap_secure <= cap_max");
      if (!(m.rate_limit >= 0)) fail("microgrid " + std::to_string(m.id) + ": rate_limit must be >= 0");
      if (m.initial_stored && !(*m.initial_stored >= m.cap_secure && *m.initial_stored <= m.cap_max))
        fail("microgrid " + std::to_string(m.id) + ": initial stored level outside [cap_secure, cap_max]");
    } else {
      seen_plain = true;
    }
    if (!std::isfinite(m.omega)) fail("microgrid " + std::to_string(m.id) + ": omega must be finite");
  }
  if (!(alpha > 0)) fail("alpha must be positive");
  if (!(price_min < price_max)) fail("price bounds must satisfy min < max");
  if (horizon < 1) fail("horizon must be >= 1");
  if (grid_cost.empty() || (grid_cost.size() != 1 && grid_cost.size() < horizon))
    fail("grid_cost must hold one entry or one per step of the horizon");
  for (const auto& g : grid_cost)
    if (!(g.a >= 0)) fail("grid_cost: quadratic coefficient a must be >= 0");
  const auto n = static_cast<Eigen::Index>(microgrids.size());
  const auto steps = static_cast<Eigen::Index>(horizon);
  if (base_load.cols() != n || res_output.cols() != n) fail("profiles must have one column per microgrid");
  if (base_load.rows() < steps || res_output.rows() < steps)
    fail("profiles cover " + std::to_string(std::min(base_load.rows(), res_output.rows())) +
         " steps but the horizon is " + std::to_string(horizon));
  if (!(base_load.topRows(steps).array() > 0).all()) fail("base loads must be positive");
  if (!(res_output.topRows(steps).array() > 0).all()) fail("renewable outputs must be positive");
  if (solver) {
    try {
      solver->validate();
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
}

Profiles synthesize_profiles(const SyntheticProfile& spec) {
  const std::size_t n = spec.base_mean.size();
  if (spec.base_amplitude.size() != n || spec.res_peak.size() != n || spec.res_floor.size() != n)
    throw ScenarioError("synthetic profile: per-microgrid arrays differ in length");
  if (!(spec.noise >= 0 && spec.noise < 1)) throw ScenarioError("synthetic profile: noise must lie in [0, 1)");

  RandomStream rng(spec.seed);
  Profiles p;
  p.base_load.resize(static_cast<Eigen::Index>(spec.steps), static_cast<Eigen::Index>(n));
  p.res_output.resize(static_cast<Eigen::Index>(spec.steps), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < spec.steps; ++k) {
    const double hour = static_cast<double>(k % 24);
    const double daily = std::sin(2 * std::numbers::pi * (hour - 12) / 24);  // evening peak
    const double sun = std::max(0.0, std::sin(std::numbers::pi * (hour - 6) / 12));
    for (std::size_t j = 0; j < n; ++j) {
      const double base_noise = 1 + spec.noise * (2 * rng.uniform() - 1);
      const double res_noise = 1 + spec.noise * (2 * rng.uniform() - 1);
      const auto r = static_cast<Eigen::Index>(k);
      const auto c = static_cast<Eigen::Index>(j);
      p.base_load(r, c) = spec.base_mean[j] * (1 + spec.base_amplitude[j] * daily) * base_noise;
      p.res_output(r, c) = (spec.res_floor[j] + spec.res_peak[j] * sun) * res_noise;
    }
  }
  return p;
}

Profiles read_profiles_csv(const std::filesystem::path& path, std::size_t microgrids) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open profile file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ScenarioError("profile file is empty: " + path.string());

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ScenarioError("profile file " + path.string() + ": bad number '" + cell + "'");
      }
    }
    if (row.size() != 1 + 2 * microgrids)
      throw ScenarioError("profile file " + path.string() + ": expected " + std::to_string(1 + 2 * microgrids) +
                          " columns, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  Profiles p;
  const auto steps = static_cast<Eigen::Index>(rows.size());
  const auto n = static_cast<Eigen::Index>(microgrids);
  p.base_load.resize(steps, n);
  p.res_output.resize(steps, n);
  for (Eigen::Index k = 0; k < steps; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      p.base_load(k, j) = rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(1 + j)];
      p.res_output(k, j) = rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(1 + n + j)];
    }
  }
  return p;
}

namespace {

Eigen::MatrixXd matrix_from_json(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) throw ScenarioError(std::string("profiles.") + what + " must be a non-empty array");
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != c)
      throw ScenarioError(std::string("profiles.") + what + ": ragged rows");
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

GridCost grid_cost_from_json(const json& j) {
  return GridCost{j.at("a").get<double>(), j.at("b").get<double>(), j.at("c").get<double>()};
}

std::vector<double> doubles(const json& j, const char* key) { return j.at(key).get<std::vector<double>>(); }

ScenarioConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  cfg.name = doc.value("name", std::string{});
  cfg.alpha = doc.at("alpha").get<double>();
  const auto cap = doc.value("utility_cap", std::string("continuous"));
  if (cap == "continuous")
    cfg.utility_cap = UtilityCap::Continuous;
  else if (cap == "as_written")
    cfg.utility_cap = UtilityCap::AsWritten;
  else
    throw ScenarioError("utility_cap must be \"continuous\" or \"as_written\"");

  const auto bounds = doc.at("price_bounds").get<std::vector<double>>();
  if (bounds.size() != 2) throw ScenarioError("price_bounds must hold two numbers");
  cfg.price_min = bounds[0];
  cfg.price_max = bounds[1];
  const auto horizon = doc.value("horizon", std::int64_t{48});
  if (horizon < 1) throw ScenarioError("horizon must be >= 1");
  cfg.horizon = static_cast<std::size_t>(horizon);

  const auto& cost = doc.at("grid_cost");
  if (cost.is_array())
    for (const auto& c : cost) cfg.grid_cost.push_back(grid_cost_from_json(c));
  else
    cfg.grid_cost.push_back(grid_cost_from_json(cost));

  int next_id = 1;
  for (const auto& m : doc.at("microgrids")) {
    MicrogridSpec spec;
    spec.id = m.value("id", next_id);
    next_id = spec.id + 1;
    const auto curve = m.at("demand_curve").get<std::vector<double>>();
    if (curve.size() != 3) throw ScenarioError("demand_curve must be [c2, c1, c0]");
    spec.demand_curve = DemandCurve{curve[0], curve[1], curve[2]};
    spec.omega = m.at("omega").get<double>();
    if (m.contains("storage") && !m.at("storage").is_null()) {
      const auto& s = m.at("storage");
      spec.has_storage = true;
      spec.cap_max = s.at("cap_max").get<double>();
      spec.cap_secure = s.at("cap_secure").get<double>();
      spec.rate_limit = s.at("rate_limit").get<double>();
      if (s.contains("initial")) spec.initial_stored = s.at("initial").get<double>();
    }
    cfg.microgrids.push_back(spec);
  }

  const auto& prof = doc.at("profiles");
  if (prof.contains("synthetic")) {
    const auto& s = prof.at("synthetic");
    SyntheticProfile syn;
    syn.seed = s.value("seed", std::uint64_t{7});
    syn.steps = s.value("steps", cfg.horizon);
    syn.base_mean = doubles(s, "base_mean");
    syn.base_amplitude = doubles(s, "base_amplitude");
    syn.res_peak = doubles(s, "res_peak");
    syn.res_floor = doubles(s, "res_floor");
    syn.noise = s.value("noise", 0.05);
    auto p = synthesize_profiles(syn);
    cfg.base_load = std::move(p.base_load);
    cfg.res_output = std::move(p.res_output);
  } else if (prof.contains("file")) {
    auto path = std::filesystem::path(prof.at("file").get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    auto p = read_profiles_csv(path, cfg.microgrids.size());
    cfg.base_load = std::move(p.base_load);
    cfg.res_output = std::move(p.res_output);
  } else {
    cfg.base_load = matrix_from_json(prof.at("base_load"), "base_load");
    cfg.res_output = matrix_from_json(prof.at("res_output"), "res_output");
  }

  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    MoiaParams params;
    params.n_nom = s.value("n_nom", params.n_nom);
    params.n_max = s.value("n_max", params.n_max);
    params.t_max = s.value("t_max", params.t_max);
    cfg.solver = params;
  }
  return cfg;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  try {
    cfg = config_from_json(json::parse(text), base_dir);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario schema: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.parent_path());
}

std::string scenario_to_json(const ScenarioConfig& config) {
  json doc;
  doc["name"] = config.name;
  doc["alpha"] = config.alpha;
  doc["utility_cap"] = config.utility_cap == UtilityCap::Continuous ? "continuous" : "as_written";
  doc["price_bounds"] = {config.price_min, config.price_max};
  doc["horizon"] = config.horizon;
  json cost = json::array();
  for (const auto& g : config.grid_cost) cost.push_back({{"a", g.a}, {"b", g.b}, {"c", g.c}});
  doc["grid_cost"] = cost;
  json grids = json::array();
  for (const auto& m : config.microgrids) {
    json g;
    g["id"] = m.id;
    g["demand_curve"] = {m.demand_curve.c2, m.demand_curve.c1, m.demand_curve.c0};
    g["omega"] = m.omega;
    if (m.has_storage) {
      g["storage"] = {{"cap_max", m.cap_max}, {"cap_secure", m.cap_secure}, {"rate_limit", m.rate_limit}};
      if (m.initial_stored) g["storage"]["initial"] = *m.initial_stored;
    }
    grids.push_back(std::move(g));
  }
  doc["microgrids"] = grids;
  doc["profiles"] = {{"base_load", matrix_to_json(config.base_load)},
                     {"res_output", matrix_to_json(config.res_output)}};
  if (config.solver)
    doc["solver"] = {{"n_nom", config.solver->n_nom}, {"n_max", config.solver->n_max}, {"t_max", config.solver->t_max}};
  return doc.dump(2);
}

std::uint64_t scenario_hash(const ScenarioConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : scenario_to_json(config)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ScenarioConfig reference_scenario(std::uint64_t profile_seed) {
  ScenarioConfig cfg;
  cfg.name = "reference";
  cfg.alpha = 0.5;
  cfg.utility_cap = UtilityCap::Continuous;
  cfg.grid_cost = {GridCost{0.01, 0.1, 1.0}};
  cfg.price_min = 1.5;
  cfg.price_max = 5.5;
  cfg.horizon = 48;

  MicrogridSpec m1;
  m1.id = 1;
  m1.has_storage = true;
  m1.cap_max = 250;
  m1.cap_secure = 125;
  m1.rate_limit = 0.1 * 250;
  m1.demand_curve = {0.01, -0.12, 0.26};
  m1.omega = 2.0;

  MicrogridSpec m2;
  m2.id = 2;
  m2.has_storage = true;
  m2.cap_max = 200;
  m2.cap_secure = 100;
  m2.rate_limit = 0.1 * 200;
  m2.demand_curve = {-0.01, 0.0, 0.13};
  m2.omega = 2.5;

  MicrogridSpec m3;
  m3.id = 3;
  m3.demand_curve = {-0.01, 0.02, 0.08};
  m3.omega = 3.0;

  cfg.microgrids = {m1, m2, m3};

  SyntheticProfile syn;
  syn.seed = profile_seed;
  syn.steps = cfg.horizon;
  syn.base_mean = {120, 90, 60};
  syn.base_amplitude = {0.3, 0.3, 0.3};
  syn.res_peak = {60, 45, 30};
  syn.res_floor = {2, 2, 2};
  syn.noise = 0.05;
  auto p = synthesize_profiles(syn);
  cfg.base_load = std::move(p.base_load);
  cfg.res_output = std::move(p.res_output);
  cfg.solver = MoiaParams{80, 320, 200, 1};
  return cfg;
}

}  // namespace mgdesign
