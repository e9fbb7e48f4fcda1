#include "internal.hpp"

namespace nbproc {

void lda_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
               const SweepOptions& options) {
  sample_topic_assignments(state, train, rng, options.workers);
  const int K = state.num_topics;
  const double smoothing = hyper.lda_alpha_total / K;
  Eigen::VectorXd concentration(K), draw(K);
  for (int j = 0; j < state.num_docs; ++j) {
    concentration = state.n_jk.row(j).transpose().cast<double>().array() + smoothing;
    sample_dirichlet_into(concentration, rng, draw);
    state.lambda.row(j) = draw.transpose();
  }
  update_topics(state, hyper.eta, rng);
  check_finite(state);
}

}  // namespace nbproc
