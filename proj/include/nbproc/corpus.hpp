#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nbproc/random.hpp"

namespace nbproc {

struct TermCount {
  int term;
  int count;
  bool operator==(const TermCount&) const = default;
};

/// Bag-of-words corpus: per-document sparse term counts over a vocabulary.
/// Every term index is below vocab_size() and every document is non-empty.
class Corpus {
 public:
  Corpus() = default;
  /// Validates the invariants; throws CorpusError on violation. Entries of a
  /// document are merged and sorted by term.
  Corpus(std::vector<std::string> vocab, std::vector<std::vector<TermCount>> docs);

  int num_docs() const noexcept { return int(docs_.size()); }
  int vocab_size() const noexcept { return int(vocab_.size()); }
  std::int64_t total_tokens() const noexcept { return total_tokens_; }
  const std::vector<std::string>& vocab() const noexcept { return vocab_; }
  const std::vector<TermCount>& doc(int j) const { return docs_.at(std::size_t(j)); }
  std::int64_t doc_length(int j) const;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<std::string> vocab_;
  std::vector<std::vector<TermCount>> docs_;
  std::int64_t total_tokens_ = 0;
};

/// Flat token list grouped by document: doc j owns terms[offsets[j], offsets[j+1]).
struct TokenSet {
  int num_docs = 0;
  int vocab_size = 0;
  std::vector<int> terms;
  std::vector<std::size_t> offsets{0};

  std::size_t size() const noexcept { return terms.size(); }
  std::size_t doc_size(int j) const { return offsets[std::size_t(j) + 1] - offsets[std::size_t(j)]; }
  std::span<const int> doc(int j) const {
    return {terms.data() + offsets[std::size_t(j)], doc_size(j)};
  }
};

/// Every token instance of the corpus, terms in ascending order per document.
TokenSet expand_tokens(const Corpus& corpus);

/// Per-document partition of token instances into training and held-out sets.
struct HeldOutSplit {
  double train_fraction = 0.0;
  TokenSet train;
  TokenSet test;
};

/// Reads UCI bag-of-words files (docword: D, W, NNZ header lines then
/// "doc word count" triples, 1-indexed; vocab: W lines). Throws ParseError
/// naming the offending line.
Corpus load_bag_of_words(const std::filesystem::path& docword_path, const std::filesystem::path& vocab_path);

void write_bag_of_words(const Corpus& corpus, const std::filesystem::path& docword_path,
                        const std::filesystem::path& vocab_path);

/// Drops terms present in fewer than `min_doc_freq` documents, remaps term
/// indices densely and drops documents left empty (with a warning on stderr).
Corpus filter_vocabulary(const Corpus& corpus, int min_doc_freq);

/// Marks a uniformly random subset of max(1, round(frac * N_j)) token
/// instances of each document as training tokens (round half up).
HeldOutSplit split_train_test(const Corpus& corpus, double frac, RandomSource& rng);

/// Settings for forward simulation of a Gamma-NB corpus.
struct SyntheticSpec {
  int topics = 5;        // K_true
  int vocab_size = 30;   // V
  int docs = 50;         // J
  double topic_concentration = 0.1;  // Dirichlet parameter of the true topics
  double r = 5.0;        // r_k for every topic
  double p = 0.5;        // p_j for every document, unless p_beta_a > 0
  double p_beta_a = 0.0; // when positive, p_j ~ Beta(p_beta_a, p_beta_b)
  double p_beta_b = 0.0;
  int max_retries = 100;
};

struct GroundTruth {
  Eigen::MatrixXd omega;  // K_true x V
  Eigen::VectorXd r_k;
  Eigen::VectorXd p_j;
  Eigen::MatrixXi n_jk;   // J x K_true
};

/// Draws omega_k ~ Dir(concentration), n_jk ~ NB(r_k, p_j) by gamma-Poisson
/// augmentation and n_jk tokens of topic k from Discrete(omega_k). Documents
/// with no tokens are redrawn up to `max_retries` times.
std::pair<Corpus, GroundTruth> synthesize_corpus(const SyntheticSpec& spec, RandomSource& rng);

}  // namespace nbproc
