#include <string>

#include "internal.hpp"
#include "nbproc/errors.hpp"

namespace nbproc {
namespace {

// p_k ~ Beta(c/K, c(1 - 1/K)): the K-atom beta-process truncation.
double beta_process_atom(const HyperParams& hyper, RandomSource& rng) {
  const int K = hyper.K;
  if (K < 2) throw DomainError("beta-process prior needs K >= 2");
  return sample_beta(hyper.c / K, hyper.c * (1.0 - 1.0 / K), rng);
}

}  // namespace

ModelState sample_prior(ModelKind kind, int num_docs, int vocab_size, const HyperParams& hyper, RandomSource& rng) {
  const int J = num_docs, K = hyper.K, V = vocab_size;
  ModelState s = make_state(kind, J, K, V);

  const Eigen::VectorXd eta = Eigen::VectorXd::Constant(V, hyper.eta);
  for (int k = 0; k < K; ++k) s.omega.row(k) = sample_dirichlet(eta, rng).transpose();

  auto gamma_weights = [&](auto shape, auto prob) {
    for (int j = 0; j < J; ++j) {
      for (int k = 0; k < K; ++k) {
        const double p = prob(j, k);
        s.lambda(j, k) = sample_gamma(shape(j, k), p / (1.0 - p), rng);
      }
    }
  };

  switch (kind) {
    case ModelKind::kLda:
    case ModelKind::kDirPfa: {
      const Eigen::VectorXd a = Eigen::VectorXd::Constant(K, hyper.lda_alpha_total / K);
      for (int j = 0; j < J; ++j) s.lambda.row(j) = sample_dirichlet(a, rng).transpose();
      break;
    }
    case ModelKind::kCrfHdp: {
      s.gamma0 = hyper.crf_gamma0;
      s.alpha = sample_gamma(hyper.a0, 1.0 / hyper.b0, rng);
      s.r_tilde = sample_dirichlet(Eigen::VectorXd::Constant(K, s.gamma0 / K), rng);
      const Eigen::VectorXd a = s.alpha * s.r_tilde;
      for (int j = 0; j < J; ++j) s.lambda.row(j) = sample_dirichlet(a, rng).transpose();
      break;
    }
    case ModelKind::kGammaNb:
    case ModelKind::kNbHdp: {
      s.gamma0 = sample_gamma(hyper.e0, 1.0 / hyper.f0, rng);
      for (int k = 0; k < K; ++k) s.r_k(k) = sample_gamma(s.gamma0 / K, 1.0 / hyper.c, rng);
      for (int j = 0; j < J; ++j) s.p_j(j) = kind == ModelKind::kGammaNb ? sample_beta(hyper.a0, hyper.b0, rng) : 0.5;
      gamma_weights([&](int, int k) { return s.r_k(k); }, [&](int j, int) { return s.p_j(j); });
      break;
    }
    case ModelKind::kNbLda: {
      s.gamma0 = sample_gamma(hyper.e0, 1.0 / hyper.f0, rng);
      for (int j = 0; j < J; ++j) {
        s.r_j(j) = sample_gamma(s.gamma0, 1.0 / hyper.c, rng);
        s.p_j(j) = sample_beta(hyper.a0, hyper.b0, rng);
      }
      gamma_weights([&](int j, int) { return s.r_j(j); }, [&](int j, int) { return s.p_j(j); });
      break;
    }
    case ModelKind::kNbFtm: {
      s.gamma0 = sample_gamma(hyper.e0, 1.0 / hyper.f0, rng);
      for (int k = 0; k < K; ++k) {
        s.r_k(k) = sample_gamma(s.gamma0, 1.0 / hyper.c, rng);
        s.pi_k(k) = beta_process_atom(hyper, rng);
      }
      for (int j = 0; j < J; ++j) {
        for (int k = 0; k < K; ++k) {
          s.b_jk(j, k) = sample_bernoulli(s.pi_k(k), rng) ? 1 : 0;
          s.lambda(j, k) = s.b_jk(j, k) ? sample_gamma(s.r_k(k), 1.0, rng) : 0.0;
        }
      }
      break;
    }
    case ModelKind::kBetaNb: {
      for (int j = 0; j < J; ++j) s.r_j(j) = sample_gamma(hyper.e0, 1.0 / hyper.f0, rng);
      for (int k = 0; k < K; ++k) s.p_k(k) = beta_process_atom(hyper, rng);
      gamma_weights([&](int j, int) { return s.r_j(j); }, [&](int, int k) { return s.p_k(k); });
      break;
    }
    case ModelKind::kMarkedBetaNb: {
      for (int k = 0; k < K; ++k) {
        s.r_k(k) = sample_gamma(hyper.e0, 1.0 / hyper.f0, rng);
        s.p_k(k) = beta_process_atom(hyper, rng);
      }
      gamma_weights([&](int, int k) { return s.r_k(k); }, [&](int, int k) { return s.p_k(k); });
      break;
    }
    case ModelKind::kMarkedGammaNb: {
      s.gamma0 = sample_gamma(hyper.e0, 1.0 / hyper.f0, rng);
      for (int k = 0; k < K; ++k) {
        s.r_k(k) = sample_gamma(s.gamma0 / K, 1.0 / hyper.c, rng);
        s.p_k(k) = sample_beta(hyper.a0, hyper.b0, rng);
      }
      gamma_weights([&](int, int k) { return s.r_k(k); }, [&](int, int k) { return s.p_k(k); });
      break;
    }
  }
  return s;
}

TokenSet simulate_tokens(ModelState& state, const std::vector<int>& doc_lengths, RandomSource& rng) {
  const int J = state.num_docs, K = state.num_topics;
  const bool normalized = model_traits(state.kind).normalized_weights;
  if (normalized && int(doc_lengths.size()) != J) throw DomainError("simulate_tokens: need one length per document");

  TokenSet tokens;
  tokens.num_docs = J;
  tokens.vocab_size = state.vocab_size;
  state.z.clear();
  for (int j = 0; j < J; ++j) {
    if (normalized) {
      for (int i = 0; i < doc_lengths[std::size_t(j)]; ++i) {
        const int k = int(sample_discrete(state.lambda.row(j), rng));
        state.z.push_back(k);
        tokens.terms.push_back(int(sample_discrete(state.omega.row(k), rng)));
      }
    } else {
      for (int k = 0; k < K; ++k) {
        const std::int64_t n = sample_poisson(state.lambda(j, k), rng);
        for (std::int64_t i = 0; i < n; ++i) {
          state.z.push_back(k);
          tokens.terms.push_back(int(sample_discrete(state.omega.row(k), rng)));
        }
      }
    }
    tokens.offsets.push_back(tokens.terms.size());
  }
  recount(state, tokens);
  return tokens;
}

}  // namespace nbproc
