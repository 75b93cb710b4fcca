#pragma once

// Counter-based random numbers (Philox4x32-10) and random test objects.
//
// Every experiment derives an independent stream from (seed, stream id), so
// results never depend on thread scheduling or on the order trials run in.

#include <array>
#include <cstdint>
#include <limits>

#include "corrlog/symmat.hpp"

namespace corrlog {

/// Philox4x32 with 10 rounds. Key = seed, counter = (block index, stream id).
/// Satisfies UniformRandomBitGenerator.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// The raw bijection: ten rounds applied to `counter` under `key`.
  static Block encrypt(Block counter, Key key) noexcept;

 private:
  Key key_;
  std::uint64_t block_ = 0;
  std::uint64_t stream_;
  Block buffer_{};
  unsigned used_ = 4;
};

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Philox4x32& rng) noexcept;
/// Standard normal (Box-Muller on two uniforms, no cached state).
double standard_normal(Philox4x32& rng) noexcept;

/// Entries i.i.d. uniform on [-bound, bound].
Vector random_gamma(Index n, double bound, Philox4x32& rng);

/// Correlation matrix of a Wishart-type draw W W' with W n x (n + extra_dof)
/// standard normal.
CorrelationMatrix random_correlation(Index n, Philox4x32& rng, Index extra_dof = 2);

}  // namespace corrlog
