#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "nbproc/corpus.hpp"
#include "nbproc/evaluation.hpp"
#include "nbproc/hyper.hpp"
#include "nbproc/model_kind.hpp"
#include "nbproc/models.hpp"

namespace nbproc {

/// Final state, collected samples and per-iteration trace of one chain.
struct FitResult {
  ModelState state;
  SampleAccumulator accumulator;
  TraceReport trace;
};

/// Runs initialize() then hyper.iters sweeps on split.train, collecting every
/// collect_every-th sample after burn-in. The trace perplexity is the
/// collected-sample perplexity once collection has started and the
/// current-state perplexity before that.
FitResult fit_model(ModelKind kind, const HeldOutSplit& split, const HyperParams& hyper, RandomSource& rng,
                    const SweepOptions& options = {});

struct SyntheticSource {
  SyntheticSpec spec;
  std::uint64_t seed = 1;
};

/// Fully resolved experiment description. Exactly one of the corpus paths
/// (both docword and vocab) or `synthetic` is set.
struct RunConfig {
  ModelKind model = ModelKind::kGammaNb;
  std::optional<std::filesystem::path> docword;
  std::optional<std::filesystem::path> vocab;
  std::optional<SyntheticSource> synthetic;
  int min_doc_freq = 0;  // vocabulary filter; 0 keeps everything
  double train_frac = 0.6;
  HyperParams hyper;     // hyper.seed seeds the split and the chain
  int workers = 1;
  std::filesystem::path output_dir = "nbproc-out";

  void validate() const;
};

/// Reads a JSON config. Unknown keys and wrongly typed values raise ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

/// Overlays the keys present in a JSON document onto `config`.
void apply_run_config_json(RunConfig& config, const std::string& json_text);

/// Canonical JSON of the resolved configuration.
std::string run_config_json(const RunConfig& config, bool include_output_dir = true);

/// 16-hex-digit FNV-1a hash of the canonical config, output_dir excluded.
std::string config_hash(const RunConfig& config);

/// Commit identifier baked in at build time.
std::string build_commit();

struct RunSummary {
  double perplexity = 0.0;
  int active_topics = 0;
  double runtime_seconds = 0.0;
  std::string config_hash;
};

/// Loads or synthesizes the corpus, fits, and writes trace.csv, params.csv,
/// report.json and config.json into output_dir. An INCOMPLETE marker file
/// exists in output_dir until every artifact has been written.
RunSummary run_experiment(const RunConfig& config);

}  // namespace nbproc
