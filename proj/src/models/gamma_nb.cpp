// Gamma-NB, NB-HDP (p_j fixed at 0.5) and Marked-Gamma-NB kernels.

#include <cmath>

#include "internal.hpp"

namespace nbproc {
namespace {

void shared_dispersion_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper,
                             RandomSource& rng, const SweepOptions& options, bool learn_p) {
  sample_topic_assignments(state, train, rng, options.workers);
  const int J = state.num_docs, K = state.num_topics;

  if (learn_p) {
    const double r_sum = state.r_k.sum();
    for (int j = 0; j < J; ++j) state.p_j(j) = sample_beta(hyper.a0 + detail::doc_tokens(train, j), hyper.b0 + r_sum, rng);
  }
  double q = 0.0;  // -sum_j ln(1 - p_j)
  for (int j = 0; j < J; ++j) q += neg_log1m(state.p_j(j));
  state.p_prime = q / (hyper.c + q);

  detail::sample_table_counts(state, [&](int, int k) { return state.r_k(k); }, rng, options);
  const Eigen::VectorXi tables = state.l_jk.colwise().sum().transpose();

  const double base_shape = state.gamma0 / K;
  for (int k = 0; k < K; ++k) state.l_prime(k) = detail::draw_crt(tables(k), base_shape, rng, options);
  // -ln(1 - p') = ln(1 + q / c)
  state.gamma0 = sample_gamma(hyper.e0 + state.l_prime.sum(), 1.0 / (hyper.f0 + std::log1p(q / hyper.c)), rng);

  const double r_rate = hyper.c + q;
  for (int k = 0; k < K; ++k) {
    state.r_k(k) = sample_gamma(state.gamma0 / K + tables(k) + detail::r_shape_offset(options), 1.0 / r_rate, rng);
  }
  detail::sample_lambda(state, [&](int, int k) { return state.r_k(k); }, [&](int j, int) { return state.p_j(j); }, rng);
  update_topics(state, hyper.eta, rng);
  check_finite(state);
}

}  // namespace

void gamma_nb_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                    const SweepOptions& options) {
  shared_dispersion_sweep(state, train, hyper, rng, options, true);
}

void nb_hdp_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                  const SweepOptions& options) {
  state.p_j.setConstant(0.5);
  shared_dispersion_sweep(state, train, hyper, rng, options, false);
}

void marked_gamma_nb_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                           const SweepOptions& options) {
  sample_topic_assignments(state, train, rng, options.workers);
  const int J = state.num_docs, K = state.num_topics;

  const Eigen::VectorXi words = state.n_jk.colwise().sum().transpose();
  Eigen::VectorXd q(K);  // -J ln(1 - p_k)
  for (int k = 0; k < K; ++k) {
    state.p_k(k) = sample_beta(hyper.a0 + words(k), hyper.b0 + J * state.r_k(k), rng);
    q(k) = J * neg_log1m(state.p_k(k));
    state.p_prime_vec(k) = q(k) / (hyper.c + q(k));
  }

  detail::sample_table_counts(state, [&](int, int k) { return state.r_k(k); }, rng, options);
  const Eigen::VectorXi tables = state.l_jk.colwise().sum().transpose();

  const double base_shape = state.gamma0 / K;
  double rate = hyper.f0;
  for (int k = 0; k < K; ++k) {
    state.l_prime(k) = detail::draw_crt(tables(k), base_shape, rng, options);
    rate += std::log1p(q(k) / hyper.c) / K;
  }
  state.gamma0 = sample_gamma(hyper.e0 + state.l_prime.sum(), 1.0 / rate, rng);

  for (int k = 0; k < K; ++k) {
    state.r_k(k) =
        sample_gamma(state.gamma0 / K + tables(k) + detail::r_shape_offset(options), 1.0 / (hyper.c + q(k)), rng);
  }
  detail::sample_lambda(state, [&](int, int k) { return state.r_k(k); }, [&](int, int k) { return state.p_k(k); }, rng);
  update_topics(state, hyper.eta, rng);
  check_finite(state);
}

}  // namespace nbproc
