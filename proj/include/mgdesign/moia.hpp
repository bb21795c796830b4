#pragma once

#include "mgdesign/dominance.hpp"
#include "mgdesign/random.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mgdesign {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A candidate decision vector (antibody) and its objective image.
/// The last objective coordinate is the constraint penalty.
template <typename Scalar>
struct Member {
  VectorX<Scalar> x;
  VectorX<Scalar> f;

  Scalar penalty() const { return f[f.size() - 1]; }
};

template <typename Scalar>
struct Population {
  std::vector<Member<Scalar>> members;
  std::size_t counter = 0;

  std::size_t size() const { return members.size(); }
};

struct MoiaParams {
  std::size_t n_nom = 80;
  std::size_t n_max = 320;
  std::size_t t_max = 200;
  std::uint64_t seed = 1;

  void validate() const {
    if (n_nom == 0 || n_nom > n_max) throw std::invalid_argument("MoiaParams: require 0 < n_nom <= n_max");
    if (t_max < 1) throw std::invalid_argument("MoiaParams: require t_max >= 1");
  }
};

/// A box-bounded problem whose objective vector carries the constraint
/// penalty (>= 0, zero iff feasible) as its last coordinate.
template <typename P>
concept BoxProblem = requires(const P& p, const VectorX<typename P::Scalar>& x) {
  typename P::Scalar;
  { p.lower() } -> std::convertible_to<VectorX<typename P::Scalar>>;
  { p.upper() } -> std::convertible_to<VectorX<typename P::Scalar>>;
  { p.evaluate(x) } -> std::convertible_to<VectorX<typename P::Scalar>>;
};

/// Final nondominated, feasible set with per-dimension extremes of the
/// objective vectors.
template <typename Scalar>
struct ParetoArchive {
  std::vector<Member<Scalar>> entries;
  VectorX<Scalar> objective_max;
  VectorX<Scalar> objective_min;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }

  static ParetoArchive from_members(std::vector<Member<Scalar>> members) {
    ParetoArchive archive;
    archive.entries = std::move(members);
    if (!archive.entries.empty()) {
      archive.objective_max = archive.entries.front().f;
      archive.objective_min = archive.entries.front().f;
      for (const auto& e : archive.entries) {
        archive.objective_max = archive.objective_max.cwiseMax(e.f);
        archive.objective_min = archive.objective_min.cwiseMin(e.f);
      }
    }
    return archive;
  }
};

/// Per-iteration bookkeeping of the main loop.
struct IterationStats {
  std::size_t iteration = 0;
  std::size_t parents = 0;        // N_p(t_c) before the gene operation
  std::size_t clonal_rate = 0;    // floor(N_max / N_p)
  std::size_t expanded = 0;       // after the gene operation
  std::size_t after_prune = 0;
  std::size_t after_filter = 0;
  std::size_t after_truncate = 0;
};

template <typename Scalar>
struct MoiaResult {
  ParetoArchive<Scalar> archive;
  std::vector<IterationStats> history;
};

inline std::size_t clonal_rate(std::size_t n_max, std::size_t population_size) {
  if (population_size == 0) throw std::invalid_argument("clonal_rate: empty population");
  return n_max / population_size;
}

/// Convex-combination mutation `delta * parent + (1 - delta) * fresh`, held
/// componentwise between parent and fresh so rounding cannot leave the box.
template <typename Scalar>
VectorX<Scalar> mutate(const VectorX<Scalar>& parent, const VectorX<Scalar>& fresh, Scalar delta) {
  VectorX<Scalar> child = delta * parent + (Scalar(1) - delta) * fresh;
  return child.cwiseMax(parent.cwiseMin(fresh)).cwiseMin(parent.cwiseMax(fresh));
}

template <typename Scalar>
Population<Scalar> pareto_filter(Population<Scalar> pop) {
  std::vector<VectorX<Scalar>> objectives;
  objectives.reserve(pop.size());
  for (const auto& m : pop.members) objectives.push_back(m.f);
  const auto keep = nondominated_indices(objectives);
  if (keep.size() == pop.size()) return pop;
  std::vector<Member<Scalar>> survivors;
  survivors.reserve(keep.size());
  for (std::size_t i : keep) survivors.push_back(std::move(pop.members[i]));
  pop.members = std::move(survivors);
  return pop;
}

/// Clonal expansion. Each member spawns floor(n_max / N_p) - 1 mutants; for
/// every mutant the stream yields delta first, then the fresh box point
/// componentwise. Parents keep their positions and mutants follow in parent
/// order.
template <BoxProblem Problem>
Population<typename Problem::Scalar> gene_operation(Population<typename Problem::Scalar> pop, const Problem& problem,
                                                    std::size_t n_max, RandomStream& rng) {
  using Scalar = typename Problem::Scalar;
  const std::size_t n_p = pop.size();
  const std::size_t rate = clonal_rate(n_max, n_p);
  const VectorX<Scalar> lower = problem.lower();
  const VectorX<Scalar> upper = problem.upper();

  pop.members.reserve(n_p * rate);
  for (std::size_t i = 0; i < n_p; ++i) {
    for (std::size_t j = 1; j < rate; ++j) {
      const auto delta = static_cast<Scalar>(rng.uniform());
      const VectorX<Scalar> fresh = rng.uniform_in(lower, upper);
      Member<Scalar> child;
      child.x = mutate(pop.members[i].x, fresh, delta);
      pop.members.push_back(std::move(child));
    }
  }
  for (std::size_t i = n_p; i < pop.members.size(); ++i) pop.members[i].f = problem.evaluate(pop.members[i].x);
  return pop;
}

/// Drops the member with the largest positive penalty, repeatedly, until the
/// population fits n_nom or no infeasible member remains. Equal penalties go
/// earliest-inserted first; survivors keep their relative order.
template <typename Scalar>
Population<Scalar> constraint_prune(Population<Scalar> pop, std::size_t n_nom) {
  if (pop.size() <= n_nom) return pop;
  std::vector<std::size_t> infeasible;
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (pop.members[i].penalty() > Scalar(0)) infeasible.push_back(i);
  std::stable_sort(infeasible.begin(), infeasible.end(), [&](std::size_t a, std::size_t b) {
    return pop.members[a].penalty() > pop.members[b].penalty();
  });
  const std::size_t n_remove = std::min(pop.size() - n_nom, infeasible.size());
  std::vector<bool> removed(pop.size(), false);
  for (std::size_t r = 0; r < n_remove; ++r) removed[infeasible[r]] = true;

  std::vector<Member<Scalar>> survivors;
  survivors.reserve(pop.size() - n_remove);
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (!removed[i]) survivors.push_back(std::move(pop.members[i]));
  pop.members = std::move(survivors);
  return pop;
}

namespace detail {

/// Crowding bookkeeping over a fixed set of objective vectors with removals.
/// Fitness of a member is the sum over dimensions of the gap between its two
/// neighbours in that dimension divided by the dimension range. A member that
/// is first or last in any dimension with nonzero range is an end vector and
/// has infinite fitness. Dimensions with zero range contribute nothing.
template <typename Scalar>
class CrowdingState {
public:
  explicit CrowdingState(const std::vector<Member<Scalar>>& members) : members_(members) {
    alive_.assign(members.size(), true);
    rebuild();
  }

  std::size_t alive_count() const { return alive_n_; }

  /// Least-fitness alive member; ties go to the earliest index.
  std::size_t least_fit() const {
    std::size_t best = npos;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (!alive_[i]) continue;
      if (best == npos || fitness_[i] < fitness_[best]) best = i;
    }
    return best;
  }

  void remove(std::size_t i) {
    const bool was_end = fitness_[i] == std::numeric_limits<Scalar>::infinity();
    alive_[i] = false;
    --alive_n_;
    if (was_end) {
      // Only reached when every alive member is an end; ranges may shrink.
      rebuild();
      return;
    }
    std::vector<std::size_t> touched;
    for (std::size_t d = 0; d < dims_; ++d) {
      const std::ptrdiff_t p = prev_[d][i];
      const std::ptrdiff_t n = next_[d][i];
      if (p >= 0) next_[d][static_cast<std::size_t>(p)] = n;
      if (n >= 0) prev_[d][static_cast<std::size_t>(n)] = p;
      if (p >= 0) touched.push_back(static_cast<std::size_t>(p));
      if (n >= 0) touched.push_back(static_cast<std::size_t>(n));
    }
    for (std::size_t t : touched) fitness_[t] = compute(t);
  }

  bool alive(std::size_t i) const { return alive_[i]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
  void rebuild() {
    const std::size_t n = members_.size();
    dims_ = n == 0 ? 0 : static_cast<std::size_t>(members_.front().f.size());
    alive_n_ = static_cast<std::size_t>(std::count(alive_.begin(), alive_.end(), true));
    prev_.assign(dims_, std::vector<std::ptrdiff_t>(n, -1));
    next_.assign(dims_, std::vector<std::ptrdiff_t>(n, -1));
    range_.assign(dims_, Scalar(0));
    fitness_.assign(n, Scalar(0));

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i)
      if (alive_[i]) order.push_back(i);
    for (std::size_t d = 0; d < dims_; ++d) {
      auto sorted = order;
      std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        return members_[a].f[static_cast<Eigen::Index>(d)] < members_[b].f[static_cast<Eigen::Index>(d)];
      });
      for (std::size_t r = 0; r < sorted.size(); ++r) {
        prev_[d][sorted[r]] = r == 0 ? -1 : static_cast<std::ptrdiff_t>(sorted[r - 1]);
        next_[d][sorted[r]] = r + 1 == sorted.size() ? -1 : static_cast<std::ptrdiff_t>(sorted[r + 1]);
      }
      if (!sorted.empty())
        range_[d] = members_[sorted.back()].f[static_cast<Eigen::Index>(d)] -
                    members_[sorted.front()].f[static_cast<Eigen::Index>(d)];
    }
    for (std::size_t i : order) fitness_[i] = compute(i);
  }

  Scalar compute(std::size_t i) const {
    Scalar sum(0);
    for (std::size_t d = 0; d < dims_; ++d) {
      if (!(range_[d] > Scalar(0))) continue;
      const std::ptrdiff_t p = prev_[d][i];
      const std::ptrdiff_t n = next_[d][i];
      if (p < 0 || n < 0) return std::numeric_limits<Scalar>::infinity();
      const auto di = static_cast<Eigen::Index>(d);
      sum += (members_[static_cast<std::size_t>(n)].f[di] - members_[static_cast<std::size_t>(p)].f[di]) / range_[d];
    }
    return sum;
  }

  const std::vector<Member<Scalar>>& members_;
  std::size_t dims_ = 0;
  std::size_t alive_n_ = 0;
  std::vector<bool> alive_;
  std::vector<std::vector<std::ptrdiff_t>> prev_, next_;
  std::vector<Scalar> range_;
  std::vector<Scalar> fitness_;
};

}  // namespace detail

/// Removes the least-fit member (crowding distance, ends infinite) one at a
/// time, recomputing fitness after each removal, until |pop| <= n_nom.
template <typename Scalar>
Population<Scalar> fitness_truncate(Population<Scalar> pop, std::size_t n_nom) {
  if (pop.size() <= n_nom) return pop;
  detail::CrowdingState<Scalar> state(pop.members);
  while (state.alive_count() > n_nom) state.remove(state.least_fit());

  std::vector<Member<Scalar>> survivors;
  survivors.reserve(n_nom);
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (state.alive(i)) survivors.push_back(std::move(pop.members[i]));
  pop.members = std::move(survivors);
  return pop;
}

/// Minimum normalized improvement over `dims` for every vector, measured
/// against the extremes of the set itself. A dimension with zero range
/// contributes 1.
template <typename Vector>
std::vector<typename Vector::Scalar> knee_scores(const std::vector<Vector>& objectives,
                                                 std::span<const Eigen::Index> dims) {
  using Scalar = typename Vector::Scalar;
  std::vector<Scalar> scores(objectives.size(), std::numeric_limits<Scalar>::infinity());
  for (Eigen::Index j : dims) {
    Scalar hi = objectives.front()[j];
    Scalar lo = hi;
    for (const auto& f : objectives) {
      hi = std::max(hi, f[j]);
      lo = std::min(lo, f[j]);
    }
    const Scalar range = hi - lo;
    for (std::size_t i = 0; i < objectives.size(); ++i) {
      const Scalar ratio = range > Scalar(0) ? (hi - objectives[i][j]) / range : Scalar(1);
      scores[i] = std::min(scores[i], ratio);
    }
  }
  return scores;
}

/// Index maximizing the minimum normalized improvement over `dims`. Ties go
/// to the lexicographically smallest objective vector, then the earliest index.
template <typename Vector>
std::size_t knee_index(const std::vector<Vector>& objectives, std::span<const Eigen::Index> dims) {
  if (objectives.empty()) throw std::invalid_argument("knee_select: empty archive");
  const auto scores = knee_scores(objectives, dims);
  std::size_t best = 0;
  for (std::size_t i = 1; i < objectives.size(); ++i) {
    if (scores[i] > scores[best] ||
        (scores[i] == scores[best] && lexicographic_less(objectives[i], objectives[best])))
      best = i;
  }
  return best;
}

template <typename Scalar>
std::size_t knee_select(const ParetoArchive<Scalar>& archive, std::span<const Eigen::Index> dims) {
  std::vector<VectorX<Scalar>> objectives;
  objectives.reserve(archive.size());
  for (const auto& e : archive.entries) objectives.push_back(e.f);
  return knee_index(objectives, dims);
}

/// Full immune-algorithm run: uniform initialization of n_nom antibodies,
/// dominance filter, then t_max rounds of expansion, constraint pruning,
/// dominance filter and crowding truncation. Members with positive penalty
/// are dropped at the end; the archive may come back empty.
template <BoxProblem Problem>
MoiaResult<typename Problem::Scalar> run_moia(const Problem& problem, const MoiaParams& params) {
  using Scalar = typename Problem::Scalar;
  params.validate();
  const VectorX<Scalar> lower = problem.lower();
  const VectorX<Scalar> upper = problem.upper();
  if (lower.size() != upper.size() || (upper.array() < lower.array()).any())
    throw std::invalid_argument("run_moia: malformed decision bounds");

  RandomStream rng(params.seed);
  Population<Scalar> pop;
  pop.members.reserve(params.n_max);
  for (std::size_t i = 0; i < params.n_nom; ++i) {
    Member<Scalar> m;
    m.x = rng.uniform_in(lower, upper);
    m.f = problem.evaluate(m.x);
    pop.members.push_back(std::move(m));
  }
  pop = pareto_filter(std::move(pop));

  MoiaResult<Scalar> result;
  result.history.reserve(params.t_max);
  for (std::size_t t = 0; t < params.t_max; ++t) {
    IterationStats stats;
    stats.iteration = t;
    stats.parents = pop.size();
    stats.clonal_rate = clonal_rate(params.n_max, pop.size());
    pop = gene_operation(std::move(pop), problem, params.n_max, rng);
    stats.expanded = pop.size();
    pop = constraint_prune(std::move(pop), params.n_nom);
    stats.after_prune = pop.size();
    pop = pareto_filter(std::move(pop));
    stats.after_filter = pop.size();
    pop = fitness_truncate(std::move(pop), params.n_nom);
    stats.after_truncate = pop.size();
    ++pop.counter;
    result.history.push_back(stats);
  }

  std::erase_if(pop.members, [](const Member<Scalar>& m) { return m.penalty() > Scalar(0); });
  result.archive = ParetoArchive<Scalar>::from_members(std::move(pop.members));
  return result;
}

}  // namespace mgdesign
