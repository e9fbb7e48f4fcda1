#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "nbproc/corpus.hpp"
#include "nbproc/errors.hpp"
#include "nbproc/runner.hpp"
#include "nbproc/validation.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct SynthFlags {
  std::optional<int> k_true, docs, vocab;
  std::optional<double> topic_concentration, r, p, p_beta_a, p_beta_b;
  std::optional<std::uint64_t> seed;
  bool any() const {
    return k_true || docs || vocab || topic_concentration || r || p || p_beta_a || p_beta_b || seed;
  }
  void apply(nbproc::SyntheticSource& s) const {
    if (k_true) s.spec.topics = *k_true;
    if (docs) s.spec.docs = *docs;
    if (vocab) s.spec.vocab_size = *vocab;
    if (topic_concentration) s.spec.topic_concentration = *topic_concentration;
    if (r) s.spec.r = *r;
    if (p) s.spec.p = *p;
    if (p_beta_a) s.spec.p_beta_a = *p_beta_a;
    if (p_beta_b) s.spec.p_beta_b = *p_beta_b;
    if (seed) s.seed = *seed;
  }
};

void add_synth_flags(CLI::App* app, SynthFlags& f, const std::string& prefix) {
  app->add_option("--" + prefix + "k-true", f.k_true, "number of true topics");
  app->add_option("--" + prefix + "docs", f.docs, "number of documents");
  app->add_option("--" + prefix + "vocab", f.vocab, "vocabulary size");
  app->add_option("--" + prefix + "topic-concentration", f.topic_concentration, "Dirichlet parameter of true topics");
  app->add_option("--" + prefix + "r", f.r, "NB dispersion of every topic");
  app->add_option("--" + prefix + "p", f.p, "NB probability of every document");
  app->add_option("--" + prefix + "p-beta-a", f.p_beta_a, "draw p_j ~ Beta(a, b) instead");
  app->add_option("--" + prefix + "p-beta-b", f.p_beta_b, "second Beta parameter");
  app->add_option("--" + prefix + "seed", f.seed, "seed of the synthetic corpus");
}

void write_truth(const nbproc::GroundTruth& truth, const std::filesystem::path& path) {
  auto matrix = [](const auto& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json doc{{"omega", matrix(truth.omega)}, {"r_k", vec(truth.r_k)}, {"p_j", vec(truth.p_j)},
                     {"n_jk", matrix(truth.n_jk)}};
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Negative binomial process topic models: fit, validate, synthesize"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "fit a model and write trace.csv, params.csv, report.json, config.json");
  std::optional<std::string> config_path, model, docword, vocab, out_dir;
  std::optional<double> train_frac, c, eta, a0, b0, e0, f0, lda_alpha, crf_gamma0;
  std::optional<int> K, iters, burnin, collect_every, init_iters, workers, min_doc_freq;
  std::optional<std::uint64_t> seed;
  bool sample_crf_gamma0 = false;
  SynthFlags run_synth;
  run->add_option("--config", config_path, "JSON config; flags override its values");
  run->add_option("--model", model, "lda, dir-pfa, nb-lda, nb-hdp, nb-ftm, beta-nb, gamma-nb, marked-beta-nb, "
                                    "marked-gamma-nb, crf-hdp");
  run->add_option("--docword", docword, "UCI docword file");
  run->add_option("--vocab", vocab, "UCI vocabulary file");
  run->add_option("--min-doc-freq", min_doc_freq, "drop terms in fewer documents");
  run->add_option("--train-frac", train_frac, "fraction of each document's tokens used for training");
  run->add_option("--seed", seed, "chain and split seed");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--workers", workers, "z-sampling threads (NBPROC_THREADS overrides)");
  run->add_option("--K", K, "truncation level (default 400)");
  run->add_option("--iters", iters, "Gibbs iterations (default 2500)");
  run->add_option("--burnin", burnin, "iterations before collection (default 1000)");
  run->add_option("--collect-every", collect_every, "collection stride (default 1)");
  run->add_option("--init-iters", init_iters, "warm-start sweeps (default 50)");
  run->add_option("--c", c, "concentration c (default 1)");
  run->add_option("--eta", eta, "topic smoothing (default 0.05)");
  run->add_option("--a0", a0, "default 0.01");
  run->add_option("--b0", b0, "default 0.01");
  run->add_option("--e0", e0, "default 0.01");
  run->add_option("--f0", f0, "default 0.01");
  run->add_option("--lda-alpha-total", lda_alpha, "LDA smoothing total (default 50)");
  run->add_option("--crf-gamma0", crf_gamma0, "CRF-HDP top-level mass (default 1)");
  run->add_flag("--sample-crf-gamma0", sample_crf_gamma0, "resample the CRF-HDP top-level mass");
  add_synth_flags(run, run_synth, "synth-");

  // validate
  auto* validate = app.add_subcommand("validate", "distribution identities and per-model Geweke checks");
  bool quick = false;
  std::string fault = "none";
  std::uint64_t validate_seed = nbproc::ValidationOptions{}.seed;
  bool skip_geweke = false;
  validate->add_flag("--quick", quick, "Geweke at 2e4 draws per simulator");
  validate->add_option("--fault-inject", fault, "none, crt-shape or r-shape: run with a deliberately broken kernel")
      ->check(CLI::IsMember({"none", "crt-shape", "r-shape"}));
  validate->add_option("--seed", validate_seed, "seed of the checks");
  validate->add_flag("--no-geweke", skip_geweke, "distribution identities only");

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic corpus drawn from Gamma-NB truth");
  SynthFlags synth_flags;
  std::string synth_out = ".";
  add_synth_flags(synth, synth_flags, "");
  synth->add_option("--out", synth_out, "directory for docword.txt, vocab.txt, truth.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) {
      nbproc::RunConfig cfg = config_path ? nbproc::load_run_config(*config_path) : nbproc::RunConfig{};
      if (model) cfg.model = nbproc::parse_model_kind(*model);
      if (docword) cfg.docword = *docword;
      if (vocab) cfg.vocab = *vocab;
      if (run_synth.any()) {
        if (!cfg.synthetic) cfg.synthetic.emplace();
        run_synth.apply(*cfg.synthetic);
      }
      if (min_doc_freq) cfg.min_doc_freq = *min_doc_freq;
      if (train_frac) cfg.train_frac = *train_frac;
      if (seed) cfg.hyper.seed = *seed;
      if (out_dir) cfg.output_dir = *out_dir;
      if (workers) cfg.workers = *workers;
      if (K) cfg.hyper.K = *K;
      if (iters) cfg.hyper.iters = *iters;
      if (burnin) cfg.hyper.burnin = *burnin;
      if (collect_every) cfg.hyper.collect_every = *collect_every;
      if (init_iters) cfg.hyper.init_iters = *init_iters;
      if (c) cfg.hyper.c = *c;
      if (eta) cfg.hyper.eta = *eta;
      if (a0) cfg.hyper.a0 = *a0;
      if (b0) cfg.hyper.b0 = *b0;
      if (e0) cfg.hyper.e0 = *e0;
      if (f0) cfg.hyper.f0 = *f0;
      if (lda_alpha) cfg.hyper.lda_alpha_total = *lda_alpha;
      if (crf_gamma0) cfg.hyper.crf_gamma0 = *crf_gamma0;
      if (sample_crf_gamma0) cfg.hyper.sample_crf_gamma0 = true;
      if (const char* env = std::getenv("NBPROC_THREADS"); env && *env) {
        try {
          cfg.workers = std::stoi(env);
        } catch (const std::exception&) {
          throw nbproc::ConfigError("NBPROC_THREADS must be an integer");
        }
      }
      const nbproc::RunSummary s = nbproc::run_experiment(cfg);
      std::cout << "model " << nbproc::model_name(cfg.model) << "  perplexity " << s.perplexity << "  active topics "
                << s.active_topics << "  " << s.runtime_seconds << " s  config " << s.config_hash << '\n'
                << "wrote " << cfg.output_dir.string() << '\n';
      return 0;
    }
    if (*validate) {
      nbproc::ValidationOptions opts;
      opts.quick = quick;
      opts.seed = validate_seed;
      opts.geweke = !skip_geweke;
      if (fault == "crt-shape") opts.fault = nbproc::Fault::kCrtConcentration;
      if (fault == "r-shape") opts.fault = nbproc::Fault::kRShapePlusOne;
      const auto results = nbproc::run_validation(opts, &std::cerr);
      nbproc::print_check_table(std::cout, results);
      int failed = 0;
      for (const auto& r : results) failed += r.passed ? 0 : 1;
      if (failed > 0) {
        std::cout << failed << " check(s) failed:";
        for (const auto& r : results) {
          if (!r.passed) std::cout << "\n  " << r.name;
        }
        std::cout << '\n';
        return kExitFailure;
      }
      std::cout << "all " << results.size() << " checks passed\n";
      return 0;
    }
    if (*synth) {
      nbproc::SyntheticSource src;
      synth_flags.apply(src);
      nbproc::RandomSource rng(src.seed);
      const auto [corpus, truth] = nbproc::synthesize_corpus(src.spec, rng);
      const std::filesystem::path dir(synth_out);
      std::filesystem::create_directories(dir);
      nbproc::write_bag_of_words(corpus, dir / "docword.txt", dir / "vocab.txt");
      write_truth(truth, dir / "truth.json");
      std::cout << "wrote " << corpus.num_docs() << " documents, " << corpus.total_tokens() << " tokens to "
                << dir.string() << '\n';
      return 0;
    }
  } catch (const nbproc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nbproc::CorpusError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const nbproc::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
