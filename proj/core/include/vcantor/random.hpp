#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace vcantor {

/// One step of the splitmix64 sequence. Advances `state` and returns the mixed output.
std::uint64_t splitmix64_next(std::uint64_t& state) noexcept;

/// Seed of independent stream `stream` derived from a master seed.
///
/// The stream index is pushed through the splitmix64 finalizer and xor-ed into the
/// master seed, and that value is finalized once more. Streams with different indices
/// are therefore decorrelated even for adjacent master seeds.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// xoshiro256** 1.0 (Blackman and Vigna). The 256-bit state is filled from a 64-bit
/// seed by four consecutive splitmix64 outputs.
///
/// All derived draws below are defined bit-exactly so that any implementation of the
/// same algorithm reproduces the same trees and Monte Carlo blocks:
///   - uniform01: (next() >> 11) * 2^-53
///   - uniform_index(n): Lemire's multiply-shift with rejection on the low word
class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256ss(std::uint64_t seed) noexcept;

  /// Raw state, for reproducing published test vectors. Must not be all zero.
  static Xoshiro256ss from_state(const std::array<std::uint64_t, 4>& state) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }
  result_type next() noexcept;

  double uniform01() noexcept;
  std::uint64_t uniform_index(std::uint64_t n) noexcept;

  /// Index drawn from a probability vector by inverse CDF on one uniform01 draw.
  /// Zero-probability entries are never returned.
  std::size_t categorical(std::span<const double> probabilities) noexcept;

  [[nodiscard]] const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace vcantor
