#pragma once

#include <vector>

#include <Eigen/Core>

#include "nbproc/model_kind.hpp"

namespace nbproc {

/// K-atom truncation of the random measures of one model, plus the latent
/// assignments of the training tokens.
///
/// `lambda` holds the per-document topic weights used for assignment and
/// prediction: gamma-distributed rates for the NB models, and the
/// normalized proportions (rows summing to one) for LDA / Dir-PFA / CRF-HDP.
/// Fields a model does not use keep their initial values.
struct ModelState {
  ModelKind kind = ModelKind::kGammaNb;
  int num_docs = 0;
  int num_topics = 0;
  int vocab_size = 0;

  Eigen::MatrixXd omega;   // K x V topics, rows sum to one
  Eigen::MatrixXd lambda;  // J x K
  std::vector<int> z;      // topic of each training token
  Eigen::MatrixXi n_jk;    // J x K
  Eigen::MatrixXi n_kv;    // K x V

  Eigen::VectorXd r_k;     // K
  Eigen::VectorXd r_j;     // J
  Eigen::VectorXd p_k;     // K
  Eigen::VectorXd p_j;     // J
  Eigen::VectorXd pi_k;    // K
  Eigen::MatrixXi b_jk;    // J x K, 0/1 gates (NB-FTM)
  double gamma0 = 1.0;
  double alpha = 1.0;      // CRF-HDP concentration
  double p_prime = 0.5;    // Gamma-NB pooled p'
  Eigen::VectorXd p_prime_vec;  // per-document (NB-LDA) or per-topic (NB-FTM, Marked-Gamma-NB) p'
  Eigen::MatrixXi l_jk;    // J x K CRT counts
  Eigen::VectorXi l_prime; // second-level CRT counts (per topic, or per document for NB-LDA)
  Eigen::VectorXd r_tilde; // K, CRF-HDP top-level proportions
};

/// Allocates all fields for the given dimensions with neutral values.
ModelState make_state(ModelKind kind, int num_docs, int num_topics, int vocab_size);

/// Recomputes n_jk and n_kv from z.
template <typename Tokens>
void recount(ModelState& state, const Tokens& tokens) {
  state.n_jk.setZero();
  state.n_kv.setZero();
  for (int j = 0; j < tokens.num_docs; ++j) {
    const auto doc = tokens.doc(j);
    const std::size_t base = tokens.offsets[std::size_t(j)];
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const int k = state.z[base + i];
      ++state.n_jk(j, k);
      ++state.n_kv(k, doc[i]);
    }
  }
}

}  // namespace nbproc
