#pragma once

#include "mgdesign/model.hpp"
#include "mgdesign/moia.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgdesign {

class ScenarioError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string name;
  std::vector<MicrogridSpec> microgrids;  // storage microgrids first
  double alpha = 0.5;
  UtilityCap utility_cap = UtilityCap::Continuous;
  std::vector<GridCost> grid_cost;  // one entry (constant) or one per step
  double price_min = 1.5;
  double price_max = 5.5;
  std::size_t horizon = 48;
  Eigen::MatrixXd base_load;   // steps x N
  Eigen::MatrixXd res_output;  // steps x N
  std::optional<MoiaParams> solver;

  std::size_t size() const { return microgrids.size(); }
  std::size_t storage_count() const;
  const GridCost& grid_cost_at(std::size_t step) const;
  Eigen::VectorXd omegas() const;

  /// s_n(0): the configured value, else the midpoint of [secure, capacity].
  Eigen::VectorXd initial_stored() const;
  NetworkState state_at(std::size_t step, const Eigen::VectorXd& stored) const;
  NetworkState initial_state() const { return state_at(0, initial_stored()); }

  /// Throws ScenarioError on the first violated invariant.
  void validate() const;
};

/// Parameters of the seeded diurnal profile generator.
struct SyntheticProfile {
  std::uint64_t seed = 7;
  std::size_t steps = 48;
  std::vector<double> base_mean;       // per microgrid, kWh per step
  std::vector<double> base_amplitude;  // relative swing of the daily sinusoid
  std::vector<double> res_peak;        // midday renewable peak, kWh per step
  std::vector<double> res_floor;       // night-time renewable output (> 0)
  double noise = 0.05;                 // relative uniform noise
};

struct Profiles {
  Eigen::MatrixXd base_load;
  Eigen::MatrixXd res_output;
};

Profiles synthesize_profiles(const SyntheticProfile& spec);

/// Reads `k,b1..bN,v1..vN` rows (header line required).
Profiles read_profiles_csv(const std::filesystem::path& path, std::size_t microgrids);

ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});

/// Canonical JSON text of a config, with profiles expanded inline.
std::string scenario_to_json(const ScenarioConfig& config);

/// FNV-1a 64 over the canonical JSON text.
std::uint64_t scenario_hash(const ScenarioConfig& config);

/// The three-microgrid, two-storage reference scenario with synthetic
/// stand-ins for the utility and cost coefficients and the load profiles.
ScenarioConfig reference_scenario(std::uint64_t profile_seed = 7);

}  // namespace mgdesign
