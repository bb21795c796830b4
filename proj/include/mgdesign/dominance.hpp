#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mgdesign {

/// Pareto dominance under minimization: u is componentwise <= v with at least
/// one strict inequality.
template <typename DerivedU, typename DerivedV>
bool dominates(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("dominates: dimension mismatch");
  bool strict = false;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] > v[i]) return false;
    if (u[i] < v[i]) strict = true;
  }
  return strict;
}

/// Lexicographic strict-less on two vectors of equal size.
template <typename DerivedU, typename DerivedV>
bool lexicographic_less(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] < v[i]) return true;
    if (v[i] < u[i]) return false;
  }
  return false;
}

namespace detail {

// Three objectives, O(n log n). In lexicographic order every earlier vector q
// has q0 <= p0, so p is dominated exactly when some earlier, different vector
// has q1 <= p1 and q2 <= p2: a prefix minimum of q2 over the ranks of q1.
template <typename Vector>
std::vector<std::size_t> nondominated_sweep3(const std::vector<Vector>& objectives,
                                             const std::vector<std::size_t>& order) {
  using Scalar = typename Vector::Scalar;
  std::vector<Scalar> second;
  second.reserve(objectives.size());
  for (const auto& f : objectives) second.push_back(f[1]);
  std::sort(second.begin(), second.end());
  second.erase(std::unique(second.begin(), second.end()), second.end());

  std::vector<Scalar> tree(second.size() + 1, std::numeric_limits<Scalar>::infinity());
  auto rank = [&](Scalar v) {
    return static_cast<std::size_t>(std::lower_bound(second.begin(), second.end(), v) - second.begin()) + 1;
  };

  std::vector<std::size_t> kept;
  for (std::size_t g = 0; g < order.size();) {
    const auto& p = objectives[order[g]];
    std::size_t end = g + 1;
    while (end < order.size() && objectives[order[end]] == p) ++end;

    const std::size_t r = rank(p[1]);
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (std::size_t i = r; i > 0; i -= i & (~i + 1)) best = std::min(best, tree[i]);
    if (!(best <= p[2]))
      for (std::size_t i = g; i < end; ++i) kept.push_back(order[i]);
    for (std::size_t i = r; i < tree.size(); i += i & (~i + 1)) tree[i] = std::min(tree[i], p[2]);
    g = end;
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace detail

/// Indices (ascending) of the vectors not dominated by any other vector.
/// Equal vectors do not dominate each other, so duplicates are all kept.
///
/// Candidates are visited in lexicographic order: anything that dominates a
/// vector precedes it in that order, and by transitivity it suffices to test
/// against the vectors already kept.
template <typename Vector>
std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& objectives) {
  std::vector<std::size_t> order(objectives.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lexicographic_less(objectives[a], objectives[b]);
  });

  const bool three = std::all_of(objectives.begin(), objectives.end(), [](const Vector& f) { return f.size() == 3; });
  if (three && objectives.size() > 64) return detail::nondominated_sweep3(objectives, order);

  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    bool dominated = false;
    for (std::size_t k : kept) {
      if (dominates(objectives[k], objectives[i])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace mgdesign
