// Beta-NB (shared p_k, document r_j) and Marked-Beta-NB (shared r_k, p_k).

#include <cmath>

#include "internal.hpp"

namespace nbproc {

void beta_nb_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                   const SweepOptions& options) {
  sample_topic_assignments(state, train, rng, options.workers);
  const int K = state.num_topics, J = state.num_docs;

  const Eigen::VectorXi words = state.n_jk.colwise().sum().transpose();
  const double r_sum = state.r_j.sum();
  double q = 0.0;  // -sum_k ln(1 - p_k)
  for (int k = 0; k < K; ++k) {
    state.p_k(k) = sample_beta(hyper.c / K + words(k), hyper.c * (1.0 - 1.0 / K) + r_sum, rng);
    q += neg_log1m(state.p_k(k));
  }

  detail::sample_table_counts(state, [&](int j, int) { return state.r_j(j); }, rng, options);
  const Eigen::VectorXi tables = state.l_jk.rowwise().sum();
  for (int j = 0; j < J; ++j) {
    state.r_j(j) = sample_gamma(hyper.e0 + tables(j) + detail::r_shape_offset(options), 1.0 / (hyper.f0 + q), rng);
  }
  detail::sample_lambda(state, [&](int j, int) { return state.r_j(j); }, [&](int, int k) { return state.p_k(k); }, rng);
  update_topics(state, hyper.eta, rng);
  check_finite(state);
}

void marked_beta_nb_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                          const SweepOptions& options) {
  sample_topic_assignments(state, train, rng, options.workers);
  const int K = state.num_topics, J = state.num_docs;

  const Eigen::VectorXi words = state.n_jk.colwise().sum().transpose();
  for (int k = 0; k < K; ++k) {
    state.p_k(k) = sample_beta(hyper.c / K + words(k), hyper.c * (1.0 - 1.0 / K) + J * state.r_k(k), rng);
  }

  detail::sample_table_counts(state, [&](int, int k) { return state.r_k(k); }, rng, options);
  const Eigen::VectorXi tables = state.l_jk.colwise().sum().transpose();
  for (int k = 0; k < K; ++k) {
    state.r_k(k) = sample_gamma(hyper.e0 + tables(k) + detail::r_shape_offset(options),
                                1.0 / (hyper.f0 + J * neg_log1m(state.p_k(k))), rng);
  }
  detail::sample_lambda(state, [&](int, int k) { return state.r_k(k); }, [&](int, int k) { return state.p_k(k); }, rng);
  update_topics(state, hyper.eta, rng);
  check_finite(state);
}

}  // namespace nbproc
