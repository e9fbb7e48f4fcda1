#pragma once

#include <string>
#include <vector>

#include "nbproc/hyper.hpp"
#include "nbproc/model_kind.hpp"
#include "nbproc/models.hpp"
#include "nbproc/random.hpp"

namespace nbproc {

/// Micro-scale joint model used by the Geweke test.
struct GewekeSettings {
  HyperParams hyper;             // K is the truncation level
  int num_docs = 2;
  int vocab_size = 3;
  std::vector<int> doc_lengths;  // fixed N_j for the normalized models; ignored otherwise
  int batches = 50;              // batch-means blocks for the successive-conditional chain
  double threshold = 4.0;
  long max_tokens = 5000;        // a chain whose data outgrows this is reported as diverged
  SweepOptions options;
};

/// Settings under which every monitored moment of `kind` is finite and the
/// successive-conditional chain mixes within a few hundred sweeps.
GewekeSettings geweke_micro_settings(ModelKind kind);

struct GewekeStatistic {
  std::string name;
  double forward_mean = 0.0;
  double forward_se = 0.0;
  double gibbs_mean = 0.0;
  double gibbs_se = 0.0;
  double z = 0.0;
};

struct GewekeReport {
  ModelKind kind = ModelKind::kGammaNb;
  int num_forward = 0;
  int num_gibbs = 0;
  double threshold = 4.0;
  std::vector<GewekeStatistic> statistics;
  bool diverged = false;  // the chain stopped early; max_abs_z() is +inf

  double max_abs_z() const;
  bool passed() const { return !diverged && max_abs_z() < threshold; }
};

/// Compares the marginal-conditional simulator (independent draws of
/// parameters then data) against the successive-conditional simulator
/// (alternating one Gibbs sweep with re-simulation of the data) on the first
/// and second moments of the model's scalar summaries. The z-score of each
/// statistic uses the iid standard error for the forward draws and a
/// batch-means standard error for the chain.
///
/// Throws DomainError when num_forward or num_gibbs is below 1 (or below
/// settings.batches for the chain), and Error on a non-finite statistic.
GewekeReport geweke_check(ModelKind kind, const GewekeSettings& settings, int num_forward, int num_gibbs,
                          RandomSource& rng);

}  // namespace nbproc
