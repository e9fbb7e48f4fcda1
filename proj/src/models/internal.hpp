#pragma once

// Shared pieces of the Gibbs kernels.

#include <cmath>
#include <cstdint>

#include "nbproc/distributions.hpp"
#include "nbproc/models.hpp"

namespace nbproc::detail {

inline double crt_concentration(double r, const SweepOptions& options) {
  return options.fault == Fault::kCrtConcentration ? 2.0 * r : r;
}

inline int draw_crt(int m, double r, RandomSource& rng, const SweepOptions& options) {
  if (m == 0) return 0;
  return int(sample_crt(m, crt_concentration(r, options), rng));
}

inline double r_shape_offset(const SweepOptions& options) {
  return options.fault == Fault::kRShapePlusOne ? 1.0 : 0.0;
}

/// Training-token count of document j.
inline double doc_tokens(const TokenSet& train, int j) { return double(train.doc_size(j)); }

/// Draws lambda_jk ~ Gamma(shape(j, k) + n_jk, scale(j, k)).
template <typename ShapeFn, typename ScaleFn>
void sample_lambda(ModelState& state, ShapeFn shape, ScaleFn scale, RandomSource& rng) {
  for (int j = 0; j < state.num_docs; ++j) {
    for (int k = 0; k < state.num_topics; ++k) {
      state.lambda(j, k) = sample_gamma(shape(j, k) + state.n_jk(j, k), scale(j, k), rng);
    }
  }
}

/// CRT draw for every (j, k) with concentration conc(j, k).
template <typename ConcFn>
void sample_table_counts(ModelState& state, ConcFn conc, RandomSource& rng, const SweepOptions& options) {
  for (int j = 0; j < state.num_docs; ++j) {
    for (int k = 0; k < state.num_topics; ++k) {
      const int n = state.n_jk(j, k);
      state.l_jk(j, k) = n == 0 ? 0 : draw_crt(n, conc(j, k), rng, options);
    }
  }
}

}  // namespace nbproc::detail
