#include "mgdesign/simulator.hpp"
#include "mgdesign/random.hpp"

#include <iostream>

namespace mgdesign {

StepOutcome simulate_step(const NetworkState& state, const ScenarioConfig& config, const MoiaParams& params,
                          std::size_t k) {
  StepProblem problem(state, config, k);
  StepOutcome out;
  out.bounds = problem.bounds();
  for (int id : out.bounds.nonmonotone_microgrids)
    std::cerr << "warning: step " << k << ": demand curve of microgrid " << id
              << " is not bracketed by its price-bound values; using its full range\n";

  MoiaParams step_params = params;
  step_params.seed = step_seed(params.seed, k);
  out.solve = run_moia(problem, step_params);

  Antibody chosen;
  StepRecord& rec = out.record;
  rec.k = k;
  rec.archive_size = out.solve.archive.size();
  if (out.solve.archive.empty()) {
    rec.fallback = true;
    chosen = fallback_antibody((config.price_min + config.price_max) / 2, state, config);
  } else {
    out.knee = knee_select(out.solve.archive, std::span<const Eigen::Index>(kUtilityDims));
    chosen = out.solve.archive.entries[out.knee].x;
  }

  const auto applied = apply_antibody(chosen, state, config);
  const ObjectiveVector f = evaluate(chosen, state, config, k);
  rec.price = chosen[0];
  rec.dispatch = applied.dispatch;
  rec.demand = applied.demand;
  rec.res_output = state.res_output;
  rec.stored = state.stored;
  rec.stored_next = applied.next_stored;
  rec.utility_microgrids = -f[0];
  rec.utility_grid = -f[1];
  rec.stored_total = -f[2];
  rec.penalty = f[3];

  const std::size_t next_k = k + 1;
  const bool have_next = static_cast<Eigen::Index>(next_k) < config.base_load.rows() &&
                         static_cast<Eigen::Index>(next_k) < config.res_output.rows();
  if (have_next) {
    out.next = config.state_at(next_k, applied.next_stored);
  } else {
    out.next = state;
    out.next.stored = applied.next_stored;
  }
  return out;
}

SimulationTrace simulate(const ScenarioConfig& config, const MoiaParams& params, const StepObserver& observer) {
  config.validate();
  params.validate();
  SimulationTrace trace;
  trace.config_hash = scenario_hash(config);
  trace.seed = params.seed;
  trace.records.reserve(config.horizon);

  NetworkState state = config.initial_state();
  for (std::size_t k = 0; k < config.horizon; ++k) {
    auto outcome = simulate_step(state, config, params, k);
    if (observer) observer(outcome);
    trace.records.push_back(outcome.record);
    state = std::move(outcome.next);
  }
  return trace;
}

}  // namespace mgdesign
