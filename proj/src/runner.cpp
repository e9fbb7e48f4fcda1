#include "nbproc/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "nbproc/errors.hpp"

#ifndef NBPROC_COMMIT
#define NBPROC_COMMIT "unknown"
#endif

namespace nbproc {

using json = nlohmann::json;

FitResult fit_model(ModelKind kind, const HeldOutSplit& split, const HyperParams& hyper, RandomSource& rng,
                    const SweepOptions& options) {
  hyper.validate();
  if (split.test.size() == 0) throw ConfigError("held-out split has no test tokens");
  FitResult out;
  out.state = initialize(kind, split.train, hyper, rng, options);
  out.accumulator = SampleAccumulator(split.train.num_docs, split.train.vocab_size);
  out.trace.records.reserve(std::size_t(hyper.iters));
  const auto start = std::chrono::steady_clock::now();
  for (int it = 1; it <= hyper.iters; ++it) {
    sweep(out.state, split.train, hyper, rng, options);
    check_finite(out.state);
    if (it > hyper.burnin && (it - hyper.burnin) % hyper.collect_every == 0) out.accumulator.add(out.state);
    const double perplexity = out.accumulator.num_samples() > 0 ? heldout_perplexity(out.accumulator, split.test)
                                                                : instantaneous_perplexity(out.state, split.test);
    out.trace.records.push_back(make_trace_record(it, perplexity, out.state));
  }
  out.trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.trace.final_perplexity = out.trace.records.back().perplexity;
  out.trace.final_active_topics = out.trace.records.back().active_topics;
  return out;
}

void RunConfig::validate() const {
  hyper.validate();
  const bool files = docword.has_value() || vocab.has_value();
  if (files && synthetic) throw ConfigError("give either corpus files or a synthetic spec, not both");
  if (!files && !synthetic) throw ConfigError("no corpus: give docword and vocab paths or a synthetic spec");
  if (files && !(docword && vocab)) throw ConfigError("docword and vocab paths must be given together");
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw ConfigError("train_frac must lie in (0, 1)");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (min_doc_freq < 0) throw ConfigError("min_doc_freq must be non-negative");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (synthetic) {
    const auto& s = synthetic->spec;
    if (s.topics < 1 || s.docs < 1 || s.vocab_size < 1) throw ConfigError("synthetic dimensions must be positive");
  }
}

namespace {

json hyper_json(const HyperParams& h) {
  return json{{"c", h.c},
              {"eta", h.eta},
              {"a0", h.a0},
              {"b0", h.b0},
              {"e0", h.e0},
              {"f0", h.f0},
              {"K", h.K},
              {"lda_alpha_total", h.lda_alpha_total},
              {"crf_gamma0", h.crf_gamma0},
              {"sample_crf_gamma0", h.sample_crf_gamma0},
              {"iters", h.iters},
              {"burnin", h.burnin},
              {"collect_every", h.collect_every},
              {"init_iters", h.init_iters}};
}

json synthetic_json(const SyntheticSource& s) {
  return json{{"k_true", s.spec.topics},
              {"docs", s.spec.docs},
              {"vocab", s.spec.vocab_size},
              {"topic_concentration", s.spec.topic_concentration},
              {"r", s.spec.r},
              {"p", s.spec.p},
              {"p_beta_a", s.spec.p_beta_a},
              {"p_beta_b", s.spec.p_beta_b},
              {"seed", s.seed}};
}

template <typename T>
T typed(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

void apply_hyper(HyperParams& h, const json& obj) {
  if (!obj.is_object()) throw ConfigError("config key 'hyper' must be an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string k = "hyper." + key;
    if (key == "c") h.c = typed<double>(value, k);
    else if (key == "eta") h.eta = typed<double>(value, k);
    else if (key == "a0") h.a0 = typed<double>(value, k);
    else if (key == "b0") h.b0 = typed<double>(value, k);
    else if (key == "e0") h.e0 = typed<double>(value, k);
    else if (key == "f0") h.f0 = typed<double>(value, k);
    else if (key == "K") h.K = typed<int>(value, k);
    else if (key == "lda_alpha_total") h.lda_alpha_total = typed<double>(value, k);
    else if (key == "crf_gamma0") h.crf_gamma0 = typed<double>(value, k);
    else if (key == "sample_crf_gamma0") h.sample_crf_gamma0 = typed<bool>(value, k);
    else if (key == "iters") h.iters = typed<int>(value, k);
    else if (key == "burnin") h.burnin = typed<int>(value, k);
    else if (key == "collect_every") h.collect_every = typed<int>(value, k);
    else if (key == "init_iters") h.init_iters = typed<int>(value, k);
    else throw ConfigError("unknown config key '" + k + "'");
  }
}

void apply_synthetic(SyntheticSource& s, const json& obj) {
  if (!obj.is_object()) throw ConfigError("config key 'synthetic' must be an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string k = "synthetic." + key;
    if (key == "k_true") s.spec.topics = typed<int>(value, k);
    else if (key == "docs") s.spec.docs = typed<int>(value, k);
    else if (key == "vocab") s.spec.vocab_size = typed<int>(value, k);
    else if (key == "topic_concentration") s.spec.topic_concentration = typed<double>(value, k);
    else if (key == "r") s.spec.r = typed<double>(value, k);
    else if (key == "p") s.spec.p = typed<double>(value, k);
    else if (key == "p_beta_a") s.spec.p_beta_a = typed<double>(value, k);
    else if (key == "p_beta_b") s.spec.p_beta_b = typed<double>(value, k);
    else if (key == "seed") s.seed = typed<std::uint64_t>(value, k);
    else throw ConfigError("unknown config key '" + k + "'");
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw std::ios_base::failure("error writing " + path.string());
}

}  // namespace

void apply_run_config_json(RunConfig& config, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "model") config.model = parse_model_kind(typed<std::string>(value, key));
    else if (key == "docword") config.docword = typed<std::string>(value, key);
    else if (key == "vocab") config.vocab = typed<std::string>(value, key);
    else if (key == "synthetic") {
      if (!config.synthetic) config.synthetic.emplace();
      apply_synthetic(*config.synthetic, value);
    } else if (key == "min_doc_freq") config.min_doc_freq = typed<int>(value, key);
    else if (key == "train_frac") config.train_frac = typed<double>(value, key);
    else if (key == "seed") config.hyper.seed = typed<std::uint64_t>(value, key);
    else if (key == "workers") config.workers = typed<int>(value, key);
    else if (key == "output_dir") config.output_dir = typed<std::string>(value, key);
    else if (key == "hyper") apply_hyper(config.hyper, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig config;
  apply_run_config_json(config, text.str());
  return config;
}

std::string run_config_json(const RunConfig& config, bool include_output_dir) {
  json doc{{"model", std::string(model_name(config.model))},
           {"min_doc_freq", config.min_doc_freq},
           {"train_frac", config.train_frac},
           {"seed", config.hyper.seed},
           {"workers", config.workers},
           {"hyper", hyper_json(config.hyper)}};
  if (config.docword) doc["docword"] = config.docword->string();
  if (config.vocab) doc["vocab"] = config.vocab->string();
  if (config.synthetic) doc["synthetic"] = synthetic_json(*config.synthetic);
  if (include_output_dir) doc["output_dir"] = config.output_dir.string();
  return doc.dump(2);
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : run_config_json(config, false)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string build_commit() { return NBPROC_COMMIT; }

RunSummary run_experiment(const RunConfig& config) {
  config.validate();
  const std::string hash = config_hash(config);
  std::filesystem::create_directories(config.output_dir);
  const auto sentinel = config.output_dir / "INCOMPLETE";
  write_file(sentinel, "run " + hash + " did not finish\n");

  RandomSource root(config.hyper.seed);
  Corpus corpus;
  if (config.synthetic) {
    RandomSource synth_rng(config.synthetic->seed);
    corpus = synthesize_corpus(config.synthetic->spec, synth_rng).first;
  } else {
    corpus = load_bag_of_words(*config.docword, *config.vocab);
  }
  if (config.min_doc_freq > 0) corpus = filter_vocabulary(corpus, config.min_doc_freq);

  RandomSource split_rng = root.child(1);
  const HeldOutSplit split = split_train_test(corpus, config.train_frac, split_rng);
  RandomSource chain_rng = root.child(2);
  SweepOptions options;
  options.workers = config.workers;
  const auto start = std::chrono::steady_clock::now();
  const FitResult fit = fit_model(config.model, split, config.hyper, chain_rng, options);
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream trace, params;
  write_trace_csv(trace, fit.trace, hash);
  write_parameters_csv(params, summarize_parameters(fit.state), hash);
  write_file(config.output_dir / "trace.csv", trace.str());
  write_file(config.output_dir / "params.csv", params.str());

  json report{{"model", std::string(model_name(config.model))},
              {"seed", config.hyper.seed},
              {"hyper", hyper_json(config.hyper)},
              {"perplexity", fit.trace.final_perplexity},
              {"active_topics", fit.trace.final_active_topics},
              {"collected_samples", fit.accumulator.num_samples()},
              {"num_docs", corpus.num_docs()},
              {"vocab_size", corpus.vocab_size()},
              {"train_tokens", split.train.size()},
              {"test_tokens", split.test.size()},
              {"runtime_seconds", runtime},
              {"config_hash", hash},
              {"commit", build_commit()}};
  write_file(config.output_dir / "report.json", report.dump(2) + "\n");

  json echo = json::parse(run_config_json(config));
  echo["config_hash"] = hash;
  write_file(config.output_dir / "config.json", echo.dump(2) + "\n");

  std::filesystem::remove(sentinel);
  return {fit.trace.final_perplexity, fit.trace.final_active_topics, runtime, hash};
}

}  // namespace nbproc
