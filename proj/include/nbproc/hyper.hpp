#pragma once

#include <cstdint>

namespace nbproc {

/// Fixed scalars of the model family. Defaults reproduce the topic-modeling
/// protocol: c = 1, eta = 0.05, a0 = b0 = e0 = f0 = 0.01, K = 400,
/// 2500 iterations of which the last 1500 are collected, 50 warm-start sweeps.
struct HyperParams {
  double c = 1.0;            // gamma / beta process concentration
  double eta = 0.05;         // topic Dirichlet smoothing
  double a0 = 0.01, b0 = 0.01;  // Beta prior on p (Gamma prior on alpha for CRF-HDP)
  double e0 = 0.01, f0 = 0.01;  // Gamma prior on gamma0 (or r_j / r_k)
  int K = 400;               // truncation level
  double lda_alpha_total = 50.0;  // LDA smoothing is lda_alpha_total / K
  double crf_gamma0 = 1.0;   // CRF-HDP top-level mass, fixed unless sample_crf_gamma0
  bool sample_crf_gamma0 = false;
  int iters = 2500;
  int burnin = 1000;
  int collect_every = 1;
  int init_iters = 50;
  std::uint64_t seed = 1;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

}  // namespace nbproc
