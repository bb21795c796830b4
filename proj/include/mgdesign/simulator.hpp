#pragma once

#include "mgdesign/model.hpp"
#include "mgdesign/moia.hpp"
#include "mgdesign/scenario.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace mgdesign {

/// Objective dimensions used for knee selection: the three utilities.
inline constexpr std::array<Eigen::Index, 3> kUtilityDims{0, 1, 2};

struct StepRecord {
  std::size_t k = 0;
  double price = 0;
  Eigen::VectorXd dispatch;     // N
  Eigen::VectorXd demand;       // N
  Eigen::VectorXd res_output;   // N
  Eigen::VectorXd stored;       // N_s, s(k)
  Eigen::VectorXd stored_next;  // N_s, s(k+1)
  double utility_microgrids = 0;
  double utility_grid = 0;
  double stored_total = 0;  // sum of s(k+1)
  double penalty = 0;
  std::size_t archive_size = 0;
  bool fallback = false;
};

struct SimulationTrace {
  std::vector<StepRecord> records;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

struct StepOutcome {
  StepRecord record;
  NetworkState next;
  MoiaResult<double> solve;
  std::size_t knee = 0;  // index into solve.archive; meaningless on fallback
  DecisionBounds bounds;
};

/// One market interval: bounds, immune-algorithm solve seeded with
/// step_seed(params.seed, k), knee selection, storage update. An empty
/// archive falls back to the balancing dispatch at the mid price.
StepOutcome simulate_step(const NetworkState& state, const ScenarioConfig& config, const MoiaParams& params,
                          std::size_t k);

using StepObserver = std::function<void(const StepOutcome&)>;

/// Runs the horizon from the initial stored levels. The observer sees every
/// step's full outcome (archive included) before the next step starts.
SimulationTrace simulate(const ScenarioConfig& config, const MoiaParams& params, const StepObserver& observer = {});

}  // namespace mgdesign
