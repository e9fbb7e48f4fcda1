#include "internal.hpp"
#include "nbproc/errors.hpp"

namespace nbproc {

ModelState initialize(ModelKind kind, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                      const SweepOptions& options) {
  hyper.validate();
  const int J = train.num_docs, K = hyper.K, V = train.vocab_size;
  ModelState s = make_state(kind, J, K, V);

  // Warm start: Gamma-NB with r_k = lda_alpha_total / K and p_j = 0.5, so
  // lambda_jk ~ Gamma(r_warm, 1) a priori and Gamma(r_warm + n_jk, 0.5) a posteriori.
  const double r_warm = hyper.lda_alpha_total / K;
  s.z.resize(train.size());
  for (auto& zi : s.z) zi = int(rng.uniform_index(std::uint64_t(K)));
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) s.lambda(j, k) = sample_gamma(r_warm, 1.0, rng);
  }
  const Eigen::VectorXd eta = Eigen::VectorXd::Constant(V, hyper.eta);
  for (int k = 0; k < K; ++k) s.omega.row(k) = sample_dirichlet(eta, rng).transpose();
  recount(s, train);

  for (int it = 0; it < hyper.init_iters; ++it) {
    sample_topic_assignments(s, train, rng, options.workers);
    detail::sample_lambda(s, [&](int, int) { return r_warm; }, [](int, int) { return 0.5; }, rng);
    update_topics(s, hyper.eta, rng);
  }

  s.r_k.setConstant(r_warm);
  s.p_j.setConstant(0.5);
  s.gamma0 = 1.0;
  const auto beta_process_atom = [&] {
    return K >= 2 ? sample_beta(hyper.c / K, hyper.c * (1.0 - 1.0 / K), rng) : 0.5;
  };

  switch (kind) {
    case ModelKind::kLda:
    case ModelKind::kDirPfa:
      for (int j = 0; j < J; ++j) s.lambda.row(j) /= s.lambda.row(j).sum();
      break;
    case ModelKind::kCrfHdp:
      s.gamma0 = hyper.crf_gamma0;
      s.alpha = sample_gamma(hyper.a0, 1.0 / hyper.b0, rng);
      s.r_tilde = sample_dirichlet(Eigen::VectorXd::Constant(K, s.gamma0 / K), rng);
      for (int j = 0; j < J; ++j) s.lambda.row(j) /= s.lambda.row(j).sum();
      break;
    case ModelKind::kNbLda:
      for (int j = 0; j < J; ++j) s.r_j(j) = sample_gamma(s.gamma0, 1.0 / hyper.c, rng);
      break;
    case ModelKind::kNbFtm:
      for (int k = 0; k < K; ++k) s.pi_k(k) = beta_process_atom();
      s.b_jk.setOnes();
      break;
    case ModelKind::kBetaNb:
      for (int j = 0; j < J; ++j) s.r_j(j) = sample_gamma(hyper.e0, 1.0 / hyper.f0, rng);
      for (int k = 0; k < K; ++k) s.p_k(k) = beta_process_atom();
      break;
    case ModelKind::kMarkedBetaNb:
      for (int k = 0; k < K; ++k) s.p_k(k) = beta_process_atom();
      break;
    case ModelKind::kMarkedGammaNb:
      for (int k = 0; k < K; ++k) s.p_k(k) = sample_beta(hyper.a0, hyper.b0, rng);
      break;
    case ModelKind::kGammaNb:
    case ModelKind::kNbHdp:
      break;
  }
  return s;
}

}  // namespace nbproc
