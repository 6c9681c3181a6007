#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace errbound {

/// Name and version of the generator, echoed into run manifests.
inline constexpr std::string_view kRngAlgorithm = "splitmix64-counter/v1";

/// Counter-based stream generator.
///
/// The stream for (seed, index, stream id) starts from
///   mix(seed ^ mix(index + golden * (stream + 1)))
/// and then advances with the SplitMix64 increment and finalizer. Every draw
/// of a simulation is a pure function of those three integers, so runs can be
/// split across workers or index ranges without changing any value.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform in (0, 1].
  double uniform_open_low() noexcept { return 1.0 - uniform(); }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Standard normal (Marsaglia polar method).
  double normal() noexcept;
  /// log of a Gamma(shape, 1) variate; stays finite for tiny shapes.
  double log_gamma_variate(double shape) noexcept;

 private:
  std::uint64_t state_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Symmetric Dirichlet(concentration) draw of length n, sampled in log space
/// so that small concentrations yield sparse but valid vectors.
std::vector<double> dirichlet(CounterRng& rng, std::size_t n, double concentration);

/// Flat simplex draw, Dirichlet(1).
inline std::vector<double> uniform_simplex(CounterRng& rng, std::size_t n) {
  return dirichlet(rng, n, 1.0);
}

/// Shuffled 0..n-1.
std::vector<std::size_t> permutation(CounterRng& rng, std::size_t n);

}  // namespace errbound
