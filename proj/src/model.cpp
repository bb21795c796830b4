#include "mgdesign/model.hpp"
#include "mgdesign/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace mgdesign {

double constraint_penalty(const NetworkState& state, const std::vector<MicrogridSpec>& specs,
                          const Eigen::VectorXd& next_stored) {
  double total = 0;
  for (Eigen::Index n = 0; n < next_stored.size(); ++n) {
    const auto& spec = specs[static_cast<std::size_t>(n)];
    total += storage_penalty(state.stored[n], next_stored[n], spec.rate_limit, spec.cap_secure, spec.cap_max);
  }
  return total;
}

bool storage_feasible(const NetworkState& state, const std::vector<MicrogridSpec>& specs,
                      const Eigen::VectorXd& next_stored) {
  for (Eigen::Index n = 0; n < next_stored.size(); ++n) {
    const auto& spec = specs[static_cast<std::size_t>(n)];
    const double next = next_stored[n];
    if (std::abs(next - state.stored[n]) > spec.rate_limit) return false;
    if (next < spec.cap_secure || next > spec.cap_max) return false;
  }
  return true;
}

DispatchOutcome apply_antibody(const Antibody& antibody, const NetworkState& state, const ScenarioConfig& config) {
  const auto n_all = static_cast<Eigen::Index>(config.size());
  const auto n_storage = static_cast<Eigen::Index>(config.storage_count());
  if (antibody.size() != n_storage + 1) throw std::invalid_argument("antibody length must be N_s + 1");

  const double price = antibody[0];
  DispatchOutcome out;
  out.demand.resize(n_all);
  out.dispatch.resize(n_all);
  out.next_stored.resize(n_storage);
  for (Eigen::Index n = 0; n < n_all; ++n) {
    const auto& spec = config.microgrids[static_cast<std::size_t>(n)];
    out.demand[n] = demand(spec.demand_curve, price, state.base_load[n]);
    if (n < n_storage) {
      out.dispatch[n] = antibody[n + 1];
      out.next_stored[n] = storage_step(state.stored[n], out.dispatch[n], out.demand[n], state.res_output[n]);
    } else {
      out.dispatch[n] = nonstorage_dispatch(out.demand[n], state.res_output[n]);
    }
  }
  return out;
}

ObjectiveVector evaluate(const Antibody& antibody, const NetworkState& state, const ScenarioConfig& config,
                         std::size_t step) {
  const auto outcome = apply_antibody(antibody, state, config);
  const double price = antibody[0];
  ObjectiveVector f(4);
  f[0] = -utility_microgrids(outcome.demand, price, config.omegas(), config.alpha, config.utility_cap);
  f[1] = -utility_grid(outcome.dispatch.sum(), price, config.grid_cost_at(step));
  f[2] = -outcome.next_stored.sum();
  f[3] = constraint_penalty(state, config.microgrids, outcome.next_stored);
  return f;
}

Antibody fallback_antibody(double price, const NetworkState& state, const ScenarioConfig& config) {
  const auto n_storage = static_cast<Eigen::Index>(config.storage_count());
  Antibody p(n_storage + 1);
  p[0] = price;
  for (Eigen::Index n = 0; n < n_storage; ++n) {
    const auto& spec = config.microgrids[static_cast<std::size_t>(n)];
    p[n + 1] = demand(spec.demand_curve, price, state.base_load[n]) - state.res_output[n];
  }
  return p;
}

std::pair<double, double> curve_range(const DemandCurve& curve, double lo, double hi) {
  double h_min = std::min(curve(lo), curve(hi));
  double h_max = std::max(curve(lo), curve(hi));
  if (curve.c2 != 0) {
    const double vertex = -curve.c1 / (2 * curve.c2);
    if (vertex > lo && vertex < hi) {
      h_min = std::min(h_min, curve(vertex));
      h_max = std::max(h_max, curve(vertex));
    }
  }
  return {h_min, h_max};
}

DecisionBounds decision_bounds(const NetworkState& state, const ScenarioConfig& config, std::size_t /*step*/) {
  const auto n_storage = static_cast<Eigen::Index>(config.storage_count());
  const double lo = config.price_min;
  const double hi = config.price_max;

  DecisionBounds bounds;
  bounds.lower.resize(n_storage + 1);
  bounds.upper.resize(n_storage + 1);
  bounds.lower[0] = lo;
  bounds.upper[0] = hi;
  for (Eigen::Index j = 0; j < n_storage; ++j) {
    const auto& spec = config.microgrids[static_cast<std::size_t>(j)];
    const double b = state.base_load[j];
    const double v = state.res_output[j];
    // Demand is largest at the low price and smallest at the high price when
    // the curve is bracketed by its endpoint values.
    double h_small = spec.demand_curve(hi);
    double h_large = spec.demand_curve(lo);
    const auto [h_min, h_max] = curve_range(spec.demand_curve, lo, hi);
    if (h_min < h_small || h_max > h_large) {
      h_small = h_min;
      h_large = h_max;
      bounds.nonmonotone_microgrids.push_back(spec.id);
    }
    bounds.lower[j + 1] = -spec.rate_limit + (1 + h_small) * b - v;
    bounds.upper[j + 1] = spec.rate_limit + (1 + h_large) * b - v;
  }
  return bounds;
}

StepProblem::StepProblem(const NetworkState& state, const ScenarioConfig& config, std::size_t step)
    : state_(state), config_(config), step_(step), bounds_(decision_bounds(state, config, step)) {}

Eigen::VectorXd StepProblem::evaluate(const Eigen::VectorXd& x) const {
  return mgdesign::evaluate(x, state_, config_, step_);
}

bool StepProblem::feasible(const Eigen::VectorXd& x) const {
  return storage_feasible(state_, config_.microgrids, apply_antibody(x, state_, config_).next_stored);
}

}  // namespace mgdesign
