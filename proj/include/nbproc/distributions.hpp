#pragma once

// Random variates and exact PMFs used by the Gibbs kernels.
//
// Parameterizations: Gamma(shape, scale) has mean shape * scale; NB(r, p)
// has mean r p / (1 - p); Log(p) has PMF p^u / (-u ln(1 - p)) for u >= 1;
// CRT(m, r) is the number of occupied tables after m customers of a Chinese
// restaurant process with concentration r.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "nbproc/errors.hpp"
#include "nbproc/random.hpp"

namespace nbproc {

inline constexpr double kProbabilityFloor = 1e-12;
inline constexpr int kDefaultStirlingCapacity = 10000;

/// Clamp a probability into [1e-12, 1 - 1e-12].
inline double clamp_probability(double p) {
  return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

/// -ln(1 - p), evaluated without cancellation for small p.
inline double neg_log1m(double p) { return -std::log1p(-p); }

inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

/// Gamma(shape, scale). Underflowing draws are clamped to the smallest
/// positive normal double.
double sample_gamma(double shape, double scale, RandomSource& rng);

/// log of a Gamma(shape, 1) draw. Stays finite for shapes far below 1,
/// where the draw itself would underflow.
double sample_log_gamma(double shape, RandomSource& rng);

/// Beta(a, b), clamped into [1e-12, 1 - 1e-12].
double sample_beta(double a, double b, RandomSource& rng);

/// Dirichlet draw. Entries are strictly positive and sum to one.
Eigen::VectorXd sample_dirichlet(const Eigen::Ref<const Eigen::VectorXd>& concentration,
                                 RandomSource& rng);

/// Writes a Dirichlet draw into `out` (same length as `concentration`).
void sample_dirichlet_into(const Eigen::Ref<const Eigen::VectorXd>& concentration,
                           RandomSource& rng, Eigen::Ref<Eigen::VectorXd> out);

bool sample_bernoulli(double p, RandomSource& rng);

/// Index k with probability weights[k] / sum(weights).
template <typename Derived>
Eigen::Index sample_discrete(const Eigen::DenseBase<Derived>& weights, RandomSource& rng) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    const double w = weights(k);
    if (!std::isfinite(w) || w < 0.0) throw DomainError("sample_discrete: weights must be finite and non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("sample_discrete: all weights are zero");
  double u = rng.uniform() * total;
  Eigen::Index last_positive = 0;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    const double w = weights(k);
    if (w > 0.0) {
      last_positive = k;
      if (u < w) return k;
    }
    u -= w;
  }
  return last_positive;
}

inline Eigen::Index sample_discrete(const std::vector<double>& weights, RandomSource& rng) {
  return sample_discrete(Eigen::Map<const Eigen::VectorXd>(weights.data(), Eigen::Index(weights.size())), rng);
}

std::int64_t sample_poisson(double rate, RandomSource& rng);

/// Logarithmic distribution on {1, 2, ...}.
std::int64_t sample_logarithmic(double p, RandomSource& rng);

/// Log-magnitudes of unsigned Stirling numbers of the first kind,
/// |s(m, j)| for 0 <= j <= m, built row by row from
/// |s(m+1, j)| = m |s(m, j)| + |s(m, j-1)|.
///
/// Rows are materialized on demand up to `capacity()`; a full 10,000-row
/// table would need ~400 MB, so only what callers ask for is stored.
class StirlingTriangle {
 public:
  explicit StirlingTriangle(int capacity = kDefaultStirlingCapacity);

  int capacity() const noexcept { return capacity_; }
  /// Highest row materialized so far.
  int built_rows() const noexcept { return built_; }

  /// Materialize rows up to m. Throws CapacityError when m > capacity().
  void ensure(int m);

  /// ln |s(m, j)|; -inf where |s(m, j)| = 0. Row m must already be built.
  double log_abs(int m, int j) const;

 private:
  static std::size_t row_offset(int m) { return std::size_t(m) * std::size_t(m + 1) / 2; }

  int capacity_;
  int built_ = 0;
  std::vector<double> log_values_;
};

/// PMF of CRT(m, r) over j = 0..m, evaluated in log-space as
/// Gamma(r) / Gamma(m + r) |s(m, j)| r^j.
Eigen::VectorXd crt_pmf(int m, double r, StirlingTriangle& triangle);

/// Convenience overload using a triangle sized for m.
Eigen::VectorXd crt_pmf(int m, double r);

/// CRT(m, r) as a sum of Bernoulli(r / (n - 1 + r)), n = 1..m.
std::int64_t sample_crt(std::int64_t m, double r, RandomSource& rng);

/// NB(r, p) via m ~ Pois(lambda), lambda ~ Gamma(r, p / (1 - p)).
std::int64_t sample_nb_direct(double r, double p, RandomSource& rng);

/// NB(r, p) via m = sum_{t <= l} Log(p), l ~ Pois(-r ln(1 - p)).
std::int64_t sample_nb_compound(double r, double p, RandomSource& rng);

}  // namespace nbproc
