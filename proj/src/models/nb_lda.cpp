// NB-LDA: document-specific dispersion r_j ~ Gamma(gamma0, 1/c) and
// probability p_j, with gamma0 pooled across documents.

#include <cmath>

#include "internal.hpp"

namespace nbproc {

void nb_lda_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                  const SweepOptions& options) {
  sample_topic_assignments(state, train, rng, options.workers);
  const int J = state.num_docs, K = state.num_topics;

  Eigen::VectorXd q(J);  // -K ln(1 - p_j)
  for (int j = 0; j < J; ++j) {
    state.p_j(j) = sample_beta(hyper.a0 + detail::doc_tokens(train, j), hyper.b0 + K * state.r_j(j), rng);
    q(j) = K * neg_log1m(state.p_j(j));
    state.p_prime_vec(j) = q(j) / (hyper.c + q(j));
  }

  detail::sample_table_counts(state, [&](int j, int) { return state.r_j(j); }, rng, options);
  const Eigen::VectorXi tables = state.l_jk.rowwise().sum();

  double rate = hyper.f0;
  for (int j = 0; j < J; ++j) {
    state.l_prime(j) = detail::draw_crt(tables(j), state.gamma0, rng, options);
    rate += std::log1p(q(j) / hyper.c);
  }
  state.gamma0 = sample_gamma(hyper.e0 + state.l_prime.sum(), 1.0 / rate, rng);

  for (int j = 0; j < J; ++j) {
    state.r_j(j) =
        sample_gamma(state.gamma0 + tables(j) + detail::r_shape_offset(options), 1.0 / (hyper.c + q(j)), rng);
  }
  detail::sample_lambda(state, [&](int j, int) { return state.r_j(j); }, [&](int j, int) { return state.p_j(j); }, rng);
  update_topics(state, hyper.eta, rng);
  check_finite(state);
}

}  // namespace nbproc
