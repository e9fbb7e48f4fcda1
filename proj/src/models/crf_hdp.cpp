// Direct-assignment sampler for the finite CRF-HDP:
//   lambda~_j ~ Dir(alpha r~), r~ ~ Dir(gamma0 / K), alpha ~ Gamma(a0, 1/b0).
// Table counts l_jk ~ CRT(n_jk, alpha r~_k); alpha uses the w_j / s_j
// auxiliary scheme. gamma0 stays fixed unless hyper.sample_crf_gamma0 is set,
// because that update is only exact as K -> infinity.

#include <cmath>

#include "internal.hpp"

namespace nbproc {
namespace {

void sample_crf_gamma0(ModelState& state, const HyperParams& hyper, RandomSource& rng) {
  const double tables = state.l_jk.sum();
  if (tables <= 0.0) return;
  const double k_plus = count_active_topics(state);
  const double w0 = sample_beta(state.gamma0 + 1.0, tables, rng);
  const double rate = hyper.f0 - std::log(w0);
  const double shape = hyper.e0 + k_plus - 1.0;
  const double odds = shape / (shape + rate * tables);
  const bool upper = shape <= 0.0 || sample_bernoulli(odds, rng);
  state.gamma0 = sample_gamma(upper ? hyper.e0 + k_plus : shape, 1.0 / rate, rng);
}

}  // namespace

void crf_hdp_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                   const SweepOptions& options) {
  sample_topic_assignments(state, train, rng, options.workers);
  const int J = state.num_docs, K = state.num_topics;

  detail::sample_table_counts(state, [&](int, int k) { return state.alpha * state.r_tilde(k); }, rng, options);

  double log_w_sum = 0.0;
  double s_sum = 0.0;
  for (int j = 0; j < J; ++j) {
    const double n = detail::doc_tokens(train, j);
    if (n == 0.0) continue;  // an empty document leaves alpha's likelihood unchanged
    log_w_sum += std::log(sample_beta(state.alpha + 1.0, n, rng));
    s_sum += sample_bernoulli(n / (n + state.alpha), rng) ? 1.0 : 0.0;
  }
  state.alpha = sample_gamma(hyper.a0 + state.l_jk.sum() - s_sum, 1.0 / (hyper.b0 - log_w_sum), rng);

  if (hyper.sample_crf_gamma0) sample_crf_gamma0(state, hyper, rng);

  const Eigen::VectorXd top = state.l_jk.colwise().sum().transpose().cast<double>().array() + state.gamma0 / K;
  sample_dirichlet_into(top, rng, state.r_tilde);

  Eigen::VectorXd concentration(K), draw(K);
  for (int j = 0; j < J; ++j) {
    concentration = state.alpha * state.r_tilde.array() + state.n_jk.row(j).transpose().cast<double>().array();
    sample_dirichlet_into(concentration, rng, draw);
    state.lambda.row(j) = draw.transpose();
  }
  update_topics(state, hyper.eta, rng);
  check_finite(state);
}

}  // namespace nbproc
