#pragma once

#include "mgdesign/moia.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgdesign {

/// Price elasticity h(price) = c2 price^2 + c1 price + c0 of a shiftable load.
template <typename Scalar>
struct BasicDemandCurve {
  Scalar c2{0};
  Scalar c1{0};
  Scalar c0{0};

  Scalar operator()(Scalar price) const { return c2 * price * price + c1 * price + c0; }
};
using DemandCurve = BasicDemandCurve<double>;

/// Generation cost a p^2 + b p + c of the power grid at one step.
template <typename Scalar>
struct BasicGridCost {
  Scalar a{0};
  Scalar b{0};
  Scalar c{0};

  Scalar operator()(Scalar power) const { return a * power * power + b * power + c; }
};
using GridCost = BasicGridCost<double>;

/// Saturated value of the consumer utility once demand exceeds omega / alpha.
enum class UtilityCap {
  Continuous,  // omega^2 / (2 alpha): continuous at the breakpoint
  AsWritten,   // omega / alpha
};

struct MicrogridSpec {
  int id = 0;
  bool has_storage = false;
  double cap_max = 0;     // kWh
  double cap_secure = 0;  // kWh
  double rate_limit = 0;  // kWh per step
  std::optional<double> initial_stored;
  DemandCurve demand_curve;
  double omega = 0;
};

/// Storage levels of the storage microgrids plus the current step's base
/// loads and renewable outputs for every microgrid.
struct NetworkState {
  Eigen::VectorXd stored;      // N_s entries
  Eigen::VectorXd base_load;   // N entries
  Eigen::VectorXd res_output;  // N entries
};

/// Decision vector: entry 0 is the price, entries 1..N_s the grid dispatch
/// to each storage microgrid.
using Antibody = Eigen::VectorXd;

/// (-U_d, -U_g, -sum of next stored levels, U_c).
using ObjectiveVector = Eigen::VectorXd;

struct ScenarioConfig;

// ---------------------------------------------------------------------------
// Scalar formulas

template <typename Scalar>
Scalar demand(const BasicDemandCurve<Scalar>& curve, Scalar price, Scalar base) {
  return (Scalar(1) + curve(price)) * base;
}

/// s + p_g - p_d + v, grouped as s + (p_g - (p_d - v)) so that the balancing
/// dispatch p_g = p_d - v leaves the level bit-for-bit unchanged.
template <typename Scalar>
Scalar storage_step(Scalar stored, Scalar dispatch, Scalar demand, Scalar res) {
  return stored + (dispatch - (demand - res));
}

/// Grid exchange that balances a microgrid without storage; negative means export.
template <typename Scalar>
Scalar nonstorage_dispatch(Scalar demand, Scalar res) {
  return demand - res;
}

template <typename Scalar>
Scalar consumer_value(Scalar power, Scalar omega, Scalar alpha, UtilityCap cap) {
  if (power <= omega / alpha) return omega * power - alpha / Scalar(2) * power * power;
  return cap == UtilityCap::Continuous ? omega * omega / (Scalar(2) * alpha) : omega / alpha;
}

/// Net value of consumption summed over microgrids.
template <typename DerivedD, typename DerivedW>
typename DerivedD::Scalar utility_microgrids(const Eigen::MatrixBase<DerivedD>& demands,
                                             typename DerivedD::Scalar price,
                                             const Eigen::MatrixBase<DerivedW>& omegas,
                                             typename DerivedD::Scalar alpha, UtilityCap cap) {
  using Scalar = typename DerivedD::Scalar;
  if (!(alpha > Scalar(0))) throw std::invalid_argument("utility_microgrids: alpha must be positive");
  if (demands.size() != omegas.size()) throw std::invalid_argument("utility_microgrids: size mismatch");
  Scalar total(0);
  for (Eigen::Index n = 0; n < demands.size(); ++n) {
    if (demands[n] < Scalar(0))
      throw std::domain_error("utility_microgrids: negative demand (check demand curve)");
    total += consumer_value(demands[n], omegas[n], alpha, cap) - price * demands[n];
  }
  return total;
}

template <typename Scalar>
Scalar utility_grid(Scalar total_dispatch, Scalar price, const BasicGridCost<Scalar>& cost) {
  return price * total_dispatch - cost(total_dispatch);
}

/// Hinge penalty of one storage microgrid: rate excess, shortfall below the
/// secure level and overflow above capacity.
template <typename Scalar>
Scalar storage_penalty(Scalar stored, Scalar next, Scalar rate_limit, Scalar cap_secure, Scalar cap_max) {
  using std::abs;
  using std::max;
  return max(abs(next - stored) - rate_limit, Scalar(0)) + max(cap_secure - next, Scalar(0)) +
         max(next - cap_max, Scalar(0));
}

// ---------------------------------------------------------------------------
// Network-level operations (model.cpp)

/// Sum of storage_penalty over storage microgrids. Zero iff every storage
/// constraint holds.
double constraint_penalty(const NetworkState& state, const std::vector<MicrogridSpec>& specs,
                          const Eigen::VectorXd& next_stored);

/// Direct check of the storage constraints (rate limit, secure floor,
/// capacity), independent of the penalty function.
bool storage_feasible(const NetworkState& state, const std::vector<MicrogridSpec>& specs,
                      const Eigen::VectorXd& next_stored);

/// Demands, full dispatch and next storage levels implied by an antibody.
struct DispatchOutcome {
  Eigen::VectorXd demand;       // N
  Eigen::VectorXd dispatch;     // N: storage entries from the antibody, others balanced
  Eigen::VectorXd next_stored;  // N_s
};

DispatchOutcome apply_antibody(const Antibody& antibody, const NetworkState& state, const ScenarioConfig& config);

ObjectiveVector evaluate(const Antibody& antibody, const NetworkState& state, const ScenarioConfig& config,
                         std::size_t step);

/// Dispatch that balances every storage microgrid at `price`, leaving
/// storage unchanged.
Antibody fallback_antibody(double price, const NetworkState& state, const ScenarioConfig& config);

struct DecisionBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  /// Set when some demand curve was not bracketed by its values at the price
  /// bounds and its true range over the price interval was used instead.
  std::vector<int> nonmonotone_microgrids;
};

/// Smallest and largest value of a quadratic on [lo, hi].
std::pair<double, double> curve_range(const DemandCurve& curve, double lo, double hi);

DecisionBounds decision_bounds(const NetworkState& state, const ScenarioConfig& config, std::size_t step);

/// One market interval as a box problem for the immune algorithm.
class StepProblem {
public:
  using Scalar = double;

  StepProblem(const NetworkState& state, const ScenarioConfig& config, std::size_t step);

  const Eigen::VectorXd& lower() const { return bounds_.lower; }
  const Eigen::VectorXd& upper() const { return bounds_.upper; }
  const DecisionBounds& bounds() const { return bounds_; }
  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;
  bool feasible(const Eigen::VectorXd& x) const;

private:
  const NetworkState& state_;
  const ScenarioConfig& config_;
  std::size_t step_;
  DecisionBounds bounds_;
};

}  // namespace mgdesign
