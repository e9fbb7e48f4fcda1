#pragma once

#include "nbproc/corpus.hpp"
#include "nbproc/hyper.hpp"
#include "nbproc/random.hpp"
#include "nbproc/state.hpp"

namespace nbproc {

/// Deliberate kernel defects used to show that the correctness harness
/// detects broken samplers.
enum class Fault {
  kNone,
  kRShapePlusOne,     // +1 on the shape of the r_k (or r_j) gamma update
  kCrtConcentration,  // CRT latent counts drawn with twice the true concentration
};

struct SweepOptions {
  int workers = 1;  // >1: per-document parallel z-sampling (different, equally valid chain)
  Fault fault = Fault::kNone;
};

/// Warm start: uniform z, prior draws of lambda and omega, then
/// `hyper.init_iters` Gamma-NB sweeps with r_k = lda_alpha_total / K and
/// p_j = 0.5 held fixed. The resulting z, omega and lambda seed the target
/// model; its own parameters start from their priors (b_jk = 1).
ModelState initialize(ModelKind kind, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                      const SweepOptions& options = {});

/// z_ji ~ Discrete(omega[k, v_ji] * lambda[j, k]); refreshes n_jk and n_kv.
void sample_topic_assignments(ModelState& state, const TokenSet& train, RandomSource& rng, int workers = 1);

/// omega_k ~ Dir(eta + n_kv).
void update_topics(ModelState& state, double eta, RandomSource& rng);

// One block Gibbs sweep per model. Each runs the z update first and the
// topic update last.
void gamma_nb_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                    const SweepOptions& options = {});
void nb_hdp_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                  const SweepOptions& options = {});
void nb_lda_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                  const SweepOptions& options = {});
void nb_ftm_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                  const SweepOptions& options = {});
void beta_nb_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                   const SweepOptions& options = {});
void marked_beta_nb_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                          const SweepOptions& options = {});
void marked_gamma_nb_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper,
                           RandomSource& rng, const SweepOptions& options = {});
void crf_hdp_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
                   const SweepOptions& options = {});
/// LDA and Dir-PFA share this kernel.
void lda_sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
               const SweepOptions& options = {});

/// Dispatches on state.kind.
void sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
           const SweepOptions& options = {});

/// Number of topics with at least one training token.
int count_active_topics(const ModelState& state);

/// Draws every parameter of `kind` from its prior (z and counts left empty).
ModelState sample_prior(ModelKind kind, int num_docs, int vocab_size, const HyperParams& hyper, RandomSource& rng);

/// Simulates token data given the parameters in `state` and sets z, n_jk and
/// n_kv accordingly. NB models draw n_jk ~ Pois(lambda_jk); normalized models
/// (LDA, Dir-PFA, CRF-HDP) keep the document lengths in `doc_lengths` and
/// draw z from Discrete(lambda_j).
TokenSet simulate_tokens(ModelState& state, const std::vector<int>& doc_lengths, RandomSource& rng);

/// Throws IterationError naming the first non-finite parameter.
void check_finite(const ModelState& state);

}  // namespace nbproc
