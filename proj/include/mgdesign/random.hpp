#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace mgdesign {

/// Seeded random stream used by every stochastic step in the library.
///
/// The engine is MT19937-64 (std::mt19937_64, whose output sequence is fixed
/// by the C++ standard). Uniform reals are formed from the top 53 bits of each
/// 64-bit draw, `(x >> 11) * 2^-53`, so the stream is identical across
/// standard library implementations. Distribution classes from <random> are
/// deliberately not used because their algorithms are implementation-defined.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// One uniform draw per component over the box [lower, upper], in index order.
  template <typename Scalar>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> uniform_in(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& lower,
                                                      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& upper) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(lower.size());
    for (Eigen::Index i = 0; i < lower.size(); ++i)
      x[i] = lower[i] + (upper[i] - lower[i]) * static_cast<Scalar>(uniform());
    return x;
  }

  std::uint64_t next_u64() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent per-step seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for market interval k of a run: mix_seed(run_seed + k).
constexpr std::uint64_t step_seed(std::uint64_t run_seed, std::uint64_t k) { return mix_seed(run_seed + k); }

}  // namespace mgdesign
