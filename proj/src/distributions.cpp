#include "nbproc/distributions.hpp"

#include <cmath>
#include <limits>

namespace nbproc {
namespace {

constexpr double kTinyPositive = std::numeric_limits<double>::min();

void require_positive(double x, const char* what) {
  if (!std::isfinite(x) || !(x > 0.0)) throw DomainError(std::string(what) + " must be finite and positive");
}

void require_open_unit(double p, const char* what) {
  if (!std::isfinite(p) || !(p > 0.0) || !(p < 1.0)) throw DomainError(std::string(what) + " must lie in (0, 1)");
}

// Marsaglia & Tsang (2000) for shape >= 1.
double gamma_shape_at_least_one(double shape, RandomSource& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Poisson by sequential inversion; used for small rates.
std::int64_t poisson_inversion(double rate, RandomSource& rng) {
  const double p0 = std::exp(-rate);
  for (;;) {
    const double u = rng.uniform();
    std::int64_t x = 0;
    double p = p0;
    double cdf = p;
    while (u > cdf) {
      ++x;
      p *= rate / double(x);
      cdf += p;
      if (p == 0.0) break;  // rounding left u above the reachable cdf
    }
    if (u <= cdf) return x;
  }
}

// Transformed rejection with squeeze (Hormann 1993, PTRS) for rate >= 10.
std::int64_t poisson_ptrs(double rate, RandomSource& rng) {
  const double slam = std::sqrt(rate);
  const double loglam = std::log(rate);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + rate + 0.43);
    if (us >= 0.07 && v <= vr) return std::int64_t(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -rate + k * loglam - std::lgamma(k + 1.0))
      return std::int64_t(k);
  }
}

}  // namespace

double sample_log_gamma(double shape, RandomSource& rng) {
  require_positive(shape, "gamma shape");
  if (shape >= 1.0) return std::log(gamma_shape_at_least_one(shape, rng));
  // Gamma(a) = Gamma(a + 1) * U^(1/a), kept in log-space.
  return std::log(gamma_shape_at_least_one(shape + 1.0, rng)) + std::log(rng.uniform()) / shape;
}

double sample_gamma(double shape, double scale, RandomSource& rng) {
  require_positive(shape, "gamma shape");
  require_positive(scale, "gamma scale");
  double g;
  if (shape >= 1.0) {
    g = gamma_shape_at_least_one(shape, rng) * scale;
  } else {
    g = std::exp(sample_log_gamma(shape, rng) + std::log(scale));
  }
  return g < kTinyPositive ? kTinyPositive : g;
}

double sample_beta(double a, double b, RandomSource& rng) {
  require_positive(a, "beta a");
  require_positive(b, "beta b");
  const double la = sample_log_gamma(a, rng);
  const double lb = sample_log_gamma(b, rng);
  return clamp_probability(std::exp(la - log_add_exp(la, lb)));
}

void sample_dirichlet_into(const Eigen::Ref<const Eigen::VectorXd>& concentration, RandomSource& rng,
                           Eigen::Ref<Eigen::VectorXd> out) {
  const Eigen::Index n = concentration.size();
  if (n == 0) throw DomainError("dirichlet concentration is empty");
  if (out.size() != n) throw DomainError("dirichlet output size mismatch");
  for (Eigen::Index k = 0; k < n; ++k) require_positive(concentration(k), "dirichlet concentration");
  if (n == 1) {
    out(0) = 1.0;
    return;
  }
  double max_log = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < n; ++k) {
    out(k) = sample_log_gamma(concentration(k), rng);
    max_log = std::max(max_log, out(k));
  }
  out = (out.array() - max_log).exp();
  out /= out.sum();
  bool clamped = false;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (out(k) < kTinyPositive) {
      out(k) = kTinyPositive;
      clamped = true;
    }
  }
  if (clamped) out /= out.sum();
}

Eigen::VectorXd sample_dirichlet(const Eigen::Ref<const Eigen::VectorXd>& concentration, RandomSource& rng) {
  Eigen::VectorXd out(concentration.size());
  sample_dirichlet_into(concentration, rng, out);
  return out;
}

bool sample_bernoulli(double p, RandomSource& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bernoulli probability must lie in [0, 1]");
  return rng.uniform() < p;
}

std::int64_t sample_poisson(double rate, RandomSource& rng) {
  if (!std::isfinite(rate) || rate < 0.0) throw DomainError("poisson rate must be finite and non-negative");
  if (rate == 0.0) return 0;
  return rate < 10.0 ? poisson_inversion(rate, rng) : poisson_ptrs(rate, rng);
}

std::int64_t sample_logarithmic(double p, RandomSource& rng) {
  require_open_unit(p, "logarithmic p");
  if (p <= 0.9) {
    // Chop-down inversion over the PMF.
    double u = rng.uniform();
    double pk = p / neg_log1m(p);
    std::int64_t k = 1;
    while (u > pk) {
      u -= pk;
      pk *= p * double(k) / double(k + 1);
      ++k;
      if (pk < 1e-300) break;
    }
    if (u <= pk) return k;
    // Mass left in the tail after rounding: fall through to the exact
    // mixture method below.
  }
  // Kemp (1981) LK algorithm; exact for every p and O(1) as p -> 1.
  const double log_q = std::log1p(-p);
  for (;;) {
    const double v = rng.uniform();
    if (v >= p) return 1;
    const double u = rng.uniform();
    const double q = -std::expm1(log_q * u);
    if (v <= q * q) {
      const double k = std::floor(1.0 + std::log(v) / std::log(q));
      if (k < 1.0 || !std::isfinite(k)) continue;
      return std::int64_t(k);
    }
    return v >= q ? 1 : 2;
  }
}

StirlingTriangle::StirlingTriangle(int capacity) : capacity_(capacity) {
  if (capacity < 0) throw DomainError("stirling triangle capacity must be non-negative");
  log_values_.assign(1, 0.0);  // |s(0, 0)| = 1
}

void StirlingTriangle::ensure(int m) {
  if (m > capacity_) {
    throw CapacityError("stirling row " + std::to_string(m) + " exceeds capacity " + std::to_string(capacity_));
  }
  if (m <= built_) return;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  log_values_.resize(row_offset(m + 1), kNegInf);
  for (int row_m = built_; row_m < m; ++row_m) {
    const double* row = log_values_.data() + row_offset(row_m);
    double* next = log_values_.data() + row_offset(row_m + 1);
    const double log_m = row_m > 0 ? std::log(double(row_m)) : kNegInf;
    for (int j = 0; j <= row_m + 1; ++j) {
      const double stay = j <= row_m ? log_m + row[j] : kNegInf;
      const double open = j >= 1 ? row[j - 1] : kNegInf;
      next[j] = log_add_exp(stay, open);
    }
  }
  built_ = m;
}

double StirlingTriangle::log_abs(int m, int j) const {
  if (m < 0 || m > built_) throw CapacityError("stirling row " + std::to_string(m) + " not built");
  if (j < 0 || j > m) return -std::numeric_limits<double>::infinity();
  return log_values_[row_offset(m) + std::size_t(j)];
}

Eigen::VectorXd crt_pmf(int m, double r, StirlingTriangle& triangle) {
  require_positive(r, "crt concentration");
  if (m < 0) throw DomainError("crt customer count must be non-negative");
  triangle.ensure(m);
  Eigen::VectorXd pmf(m + 1);
  const double log_norm = std::lgamma(r) - std::lgamma(double(m) + r);
  const double log_r = std::log(r);
  for (int j = 0; j <= m; ++j) pmf(j) = std::exp(log_norm + triangle.log_abs(m, j) + double(j) * log_r);
  return pmf;
}

Eigen::VectorXd crt_pmf(int m, double r) {
  if (m < 0) throw DomainError("crt customer count must be non-negative");
  StirlingTriangle triangle(m);
  return crt_pmf(m, r, triangle);
}

std::int64_t sample_crt(std::int64_t m, double r, RandomSource& rng) {
  require_positive(r, "crt concentration");
  if (m < 0) throw DomainError("crt customer count must be non-negative");
  std::int64_t tables = 0;
  for (std::int64_t n = 0; n < m; ++n) {
    if (rng.uniform() * (double(n) + r) < r) ++tables;
  }
  return tables;
}

std::int64_t sample_nb_direct(double r, double p, RandomSource& rng) {
  require_positive(r, "nb dispersion");
  require_open_unit(p, "nb probability");
  return sample_poisson(sample_gamma(r, p / (1.0 - p), rng), rng);
}

std::int64_t sample_nb_compound(double r, double p, RandomSource& rng) {
  require_positive(r, "nb dispersion");
  require_open_unit(p, "nb probability");
  const std::int64_t l = sample_poisson(r * neg_log1m(p), rng);
  std::int64_t m = 0;
  for (std::int64_t t = 0; t < l; ++t) m += sample_logarithmic(p, rng);
  return m;
}

}  // namespace nbproc
