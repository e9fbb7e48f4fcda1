#pragma once

#include <cstdint>
#include <random>

namespace nbproc {

/// Seeded variate source backed by std::mt19937_64.
///
/// The engine's output sequence is fixed by the C++ standard, and every
/// continuous or discrete variate in this library is derived from it by code
/// in this project (never by std:: distributions, whose algorithms are
/// implementation-defined). A given seed therefore yields the same stream on
/// every conforming platform.
///
/// Child sources are derived deterministically from (seed, index) with a
/// SplitMix64 mix, so parallel workers can own independent streams.
/// A RandomSource is single-owner; do not share one between threads.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0x5eedULL);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent child stream for `index`.
  RandomSource child(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform();

  /// Uniform integer in [0, n). `n` must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal (Marsaglia polar method).
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace nbproc
