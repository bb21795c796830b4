#pragma once

#include "mgdesign/dominance.hpp"
#include "mgdesign/moia.hpp"

#include <Eigen/Core>

#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgdesign {

/// A box problem that can also report feasibility directly, without going
/// through its penalty coordinate.
template <typename P>
concept ConstrainedBoxProblem = BoxProblem<P> && requires(const P& p, const VectorX<typename P::Scalar>& x) {
  { p.feasible(x) } -> std::convertible_to<bool>;
};

class GridBudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Tensor grid over a decision box. The last dimension varies fastest.
struct GridSpec {
  std::vector<std::size_t> counts;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::size_t budget = 1'000'000;

  static GridSpec uniform(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, std::size_t count,
                          std::size_t budget = 1'000'000) {
    return GridSpec{std::vector<std::size_t>(static_cast<std::size_t>(lower.size()), count), lower, upper, budget};
  }

  /// Number of grid points, saturating at budget + 1.
  std::size_t total() const {
    std::size_t n = 1;
    for (std::size_t c : counts) {
      if (c != 0 && n > (budget + 1) / c) return budget + 1;
      n *= c;
    }
    return n;
  }

  void validate() const {
    if (counts.size() != static_cast<std::size_t>(lower.size()) || lower.size() != upper.size())
      throw std::invalid_argument("GridSpec: dimension mismatch");
    for (std::size_t c : counts)
      if (c < 2) throw std::invalid_argument("GridSpec: every dimension needs at least 2 samples");
    if (total() > budget)
      throw GridBudgetExceeded("grid of " + std::to_string(counts.size()) + " dimensions exceeds the budget of " +
                               std::to_string(budget) + " points");
  }

  Eigen::VectorXd point(std::size_t flat) const {
    Eigen::VectorXd x(lower.size());
    for (Eigen::Index d = lower.size() - 1; d >= 0; --d) {
      const std::size_t c = counts[static_cast<std::size_t>(d)];
      const std::size_t i = flat % c;
      flat /= c;
      x[d] = i + 1 == c ? upper[d]
                        : lower[d] + (upper[d] - lower[d]) * static_cast<double>(i) / static_cast<double>(c - 1);
    }
    return x;
  }
};

enum class FrontMode {
  PenaltyForm,      // Pareto set of the full objective (penalty included), then keep penalty == 0
  ConstrainedForm,  // keep directly feasible points, then Pareto set without the penalty
};

struct ReferenceFront {
  std::vector<std::size_t> grid_index;  // ascending
  std::vector<Eigen::VectorXd> decisions;
  std::vector<Eigen::VectorXd> objectives;  // full objective vectors, penalty last
};

template <ConstrainedBoxProblem Problem>
ReferenceFront brute_force_front(const Problem& problem, const GridSpec& grid, FrontMode mode) {
  grid.validate();
  const std::size_t total = grid.total();

  std::vector<std::size_t> index;
  std::vector<Eigen::VectorXd> decisions;
  std::vector<Eigen::VectorXd> objectives;
  index.reserve(total);
  decisions.reserve(total);
  objectives.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    Eigen::VectorXd x = grid.point(i);
    if (mode == FrontMode::ConstrainedForm && !problem.feasible(x)) continue;
    Eigen::VectorXd f = problem.evaluate(x);
    index.push_back(i);
    decisions.push_back(std::move(x));
    objectives.push_back(std::move(f));
  }

  std::vector<std::size_t> keep;
  if (mode == FrontMode::PenaltyForm) {
    for (std::size_t k : nondominated_indices(objectives))
      if (objectives[k][objectives[k].size() - 1] == 0.0) keep.push_back(k);
  } else {
    std::vector<Eigen::VectorXd> reduced;
    reduced.reserve(objectives.size());
    for (const auto& f : objectives) reduced.push_back(f.head(f.size() - 1));
    keep = nondominated_indices(reduced);
  }

  ReferenceFront front;
  for (std::size_t k : keep) {
    front.grid_index.push_back(index[k]);
    front.decisions.push_back(std::move(decisions[k]));
    front.objectives.push_back(std::move(objectives[k]));
  }
  return front;
}

struct Coverage {
  double candidate_consistent = 0;  // candidate points u with some reference r <= u + tol
  double reference_covered = 0;     // reference points r with some candidate u <= r + tol
};

/// Per-dimension tolerance eps * (max - min) over a set of vectors.
inline Eigen::VectorXd relative_tolerance(const std::vector<Eigen::VectorXd>& front, double eps) {
  if (front.empty()) throw std::invalid_argument("relative_tolerance: empty front");
  Eigen::VectorXd hi = front.front();
  Eigen::VectorXd lo = front.front();
  for (const auto& f : front) {
    hi = hi.cwiseMax(f);
    lo = lo.cwiseMin(f);
  }
  return eps * (hi - lo);
}

inline Coverage front_coverage(const std::vector<Eigen::VectorXd>& candidate,
                               const std::vector<Eigen::VectorXd>& reference, const Eigen::VectorXd& tolerance) {
  if (candidate.empty() || reference.empty()) throw std::invalid_argument("front_coverage: empty front");
  const Eigen::Index dim = tolerance.size();
  for (const auto& v : candidate)
    if (v.size() != dim) throw std::invalid_argument("front_coverage: dimension mismatch");
  for (const auto& v : reference)
    if (v.size() != dim) throw std::invalid_argument("front_coverage: dimension mismatch");

  auto covered_by = [&](const Eigen::VectorXd& target, const std::vector<Eigen::VectorXd>& set) {
    for (const auto& s : set)
      if ((s.array() <= target.array() + tolerance.array()).all()) return true;
    return false;
  };
  std::size_t consistent = 0;
  for (const auto& u : candidate) consistent += covered_by(u, reference) ? 1 : 0;
  std::size_t covered = 0;
  for (const auto& r : reference) covered += covered_by(r, candidate) ? 1 : 0;
  return Coverage{static_cast<double>(consistent) / static_cast<double>(candidate.size()),
                  static_cast<double>(covered) / static_cast<double>(reference.size())};
}

}  // namespace mgdesign
