// NB-FTM: gamma-NB with p = 0.5 and beta-Bernoulli gates b_jk that switch
// topic k off for document j. A gated-off topic has lambda_jk = 0 exactly.

#include <cmath>
#include <numbers>

#include "internal.hpp"

namespace nbproc {

void nb_ftm_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                  const SweepOptions& options) {
  sample_topic_assignments(state, train, rng, options.workers);
  const int J = state.num_docs, K = state.num_topics;
  constexpr double kLn2 = std::numbers::ln2;  // -ln(1 - 0.5)
  state.p_j.setConstant(0.5);

  for (int k = 0; k < K; ++k) {
    // Pr(n_jk = 0 | b_jk = 1) = 0.5^r_k
    const double on = state.pi_k(k) * std::exp(-kLn2 * state.r_k(k));
    const double prob_on = on / (on + (1.0 - state.pi_k(k)));
    for (int j = 0; j < J; ++j) {
      state.b_jk(j, k) = state.n_jk(j, k) > 0 ? 1 : int(sample_bernoulli(prob_on, rng));
    }
  }

  const Eigen::VectorXi gates = state.b_jk.colwise().sum().transpose();
  const double pi_a = hyper.c / K;
  const double pi_b = hyper.c * (1.0 - 1.0 / K);
  Eigen::VectorXd q(K);  // -sum_j b_jk ln(1 - 0.5)
  for (int k = 0; k < K; ++k) {
    const double b = pi_b + J - gates(k);
    state.pi_k(k) = b > 0.0 ? sample_beta(pi_a + gates(k), b, rng) : clamp_probability(1.0);
    q(k) = gates(k) * kLn2;
    state.p_prime_vec(k) = q(k) / (hyper.c + q(k));
  }

  detail::sample_table_counts(state, [&](int, int k) { return state.r_k(k); }, rng, options);
  const Eigen::VectorXi tables = state.l_jk.colwise().sum().transpose();

  double rate = hyper.f0;
  for (int k = 0; k < K; ++k) {
    state.l_prime(k) = detail::draw_crt(tables(k), state.gamma0, rng, options);
    rate += std::log1p(q(k) / hyper.c);
  }
  state.gamma0 = sample_gamma(hyper.e0 + state.l_prime.sum(), 1.0 / rate, rng);

  for (int k = 0; k < K; ++k) {
    state.r_k(k) = sample_gamma(state.gamma0 + tables(k) + detail::r_shape_offset(options), 1.0 / (hyper.c + q(k)), rng);
  }
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) {
      state.lambda(j, k) = state.b_jk(j, k) ? sample_gamma(state.r_k(k) + state.n_jk(j, k), 0.5, rng) : 0.0;
    }
  }
  update_topics(state, hyper.eta, rng);
  check_finite(state);
}

}  // namespace nbproc
