#include "nbproc/random.hpp"

#include <cmath>

#include "nbproc/errors.hpp"

namespace nbproc {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

RandomSource RandomSource::child(std::uint64_t index) const {
  return RandomSource(splitmix64(seed_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

double RandomSource::uniform() {
  // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RandomSource::uniform_index(std::uint64_t n) {
  if (n == 0) throw DomainError("uniform_index: n must be positive");
  // Rejecting the lowest 2^64 mod n values leaves a multiple of n outcomes.
  const std::uint64_t threshold = (0 - n) % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x < threshold);
  return x % n;
}

double RandomSource::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  has_spare_normal_ = true;
  return u * f;
}

}  // namespace nbproc
