#include "nbproc/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "nbproc/distributions.hpp"
#include "nbproc/errors.hpp"

namespace nbproc {
namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool parse_int(std::string_view token, std::int64_t& out) {
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::int64_t read_header_value(std::istream& in, std::size_t& line_no, const char* name) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(std::string("missing header line ") + name, line_no + 1);
  ++line_no;
  const auto fields = split_whitespace(strip_cr(line));
  std::int64_t value = 0;
  if (fields.size() != 1 || !parse_int(fields[0], value) || value < 0) {
    throw ParseError(std::string("malformed header value ") + name, line_no);
  }
  return value;
}

}  // namespace

Corpus::Corpus(std::vector<std::string> vocab, std::vector<std::vector<TermCount>> docs)
    : vocab_(std::move(vocab)), docs_(std::move(docs)) {
  const int v = int(vocab_.size());
  for (std::size_t j = 0; j < docs_.size(); ++j) {
    auto& doc = docs_[j];
    std::map<int, std::int64_t> merged;
    for (const auto& tc : doc) {
      if (tc.term < 0 || tc.term >= v) throw CorpusError("document " + std::to_string(j) + ": term index out of range");
      if (tc.count <= 0) throw CorpusError("document " + std::to_string(j) + ": non-positive count");
      merged[tc.term] += tc.count;
    }
    if (merged.empty()) throw CorpusError("document " + std::to_string(j) + " has no tokens");
    doc.clear();
    for (const auto& [term, count] : merged) {
      doc.push_back({term, int(count)});
      total_tokens_ += count;
    }
  }
}

std::int64_t Corpus::doc_length(int j) const {
  std::int64_t n = 0;
  for (const auto& tc : doc(j)) n += tc.count;
  return n;
}

TokenSet expand_tokens(const Corpus& corpus) {
  TokenSet out;
  out.num_docs = corpus.num_docs();
  out.vocab_size = corpus.vocab_size();
  out.terms.reserve(std::size_t(corpus.total_tokens()));
  for (int j = 0; j < corpus.num_docs(); ++j) {
    for (const auto& tc : corpus.doc(j)) out.terms.insert(out.terms.end(), std::size_t(tc.count), tc.term);
    out.offsets.push_back(out.terms.size());
  }
  return out;
}

Corpus load_bag_of_words(const std::filesystem::path& docword_path, const std::filesystem::path& vocab_path) {
  std::ifstream in(docword_path);
  if (!in) throw std::filesystem::filesystem_error("cannot open docword file", docword_path,
                                                   std::make_error_code(std::errc::no_such_file_or_directory));
  std::size_t line_no = 0;
  const std::int64_t num_docs = read_header_value(in, line_no, "D");
  const std::int64_t num_words = read_header_value(in, line_no, "W");
  const std::int64_t nnz = read_header_value(in, line_no, "NNZ");

  std::vector<std::vector<TermCount>> docs(static_cast<std::size_t>(num_docs));
  std::int64_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    std::int64_t d = 0, w = 0, c = 0;
    if (fields.size() != 3 || !parse_int(fields[0], d) || !parse_int(fields[1], w) || !parse_int(fields[2], c)) {
      throw ParseError("expected \"docID wordID count\"", line_no);
    }
    if (d < 1 || d > num_docs) throw ParseError("docID " + std::to_string(d) + " out of range", line_no);
    if (w < 1 || w > num_words) throw ParseError("wordID " + std::to_string(w) + " out of range", line_no);
    if (c <= 0) throw ParseError("count must be positive", line_no);
    if (++rows > nnz) throw ParseError("more entries than NNZ = " + std::to_string(nnz), line_no);
    docs[std::size_t(d - 1)].push_back({int(w - 1), int(c)});
  }
  if (rows != nnz) throw ParseError("NNZ = " + std::to_string(nnz) + " but " + std::to_string(rows) + " entries found", line_no);

  std::ifstream vin(vocab_path);
  if (!vin) throw std::filesystem::filesystem_error("cannot open vocab file", vocab_path,
                                                    std::make_error_code(std::errc::no_such_file_or_directory));
  std::vector<std::string> vocab;
  std::size_t vocab_line = 0;
  while (std::getline(vin, line)) {
    ++vocab_line;
    vocab.push_back(strip_cr(line));
  }
  while (!vocab.empty() && vocab.back().empty()) vocab.pop_back();
  if (std::int64_t(vocab.size()) != num_words) {
    throw ParseError("vocab has " + std::to_string(vocab.size()) + " terms, docword header says W = " + std::to_string(num_words),
                     vocab_line);
  }
  for (std::size_t j = 0; j < docs.size(); ++j) {
    if (docs[j].empty()) throw ParseError("document " + std::to_string(j + 1) + " has no entries", 0);
  }
  return Corpus(std::move(vocab), std::move(docs));
}

void write_bag_of_words(const Corpus& corpus, const std::filesystem::path& docword_path,
                        const std::filesystem::path& vocab_path) {
  std::size_t nnz = 0;
  for (int j = 0; j < corpus.num_docs(); ++j) nnz += corpus.doc(j).size();
  std::ofstream out(docword_path);
  if (!out) throw std::filesystem::filesystem_error("cannot write docword file", docword_path,
                                                    std::make_error_code(std::errc::permission_denied));
  out << corpus.num_docs() << '\n' << corpus.vocab_size() << '\n' << nnz << '\n';
  for (int j = 0; j < corpus.num_docs(); ++j) {
    for (const auto& tc : corpus.doc(j)) out << (j + 1) << ' ' << (tc.term + 1) << ' ' << tc.count << '\n';
  }
  std::ofstream vout(vocab_path);
  if (!vout) throw std::filesystem::filesystem_error("cannot write vocab file", vocab_path,
                                                     std::make_error_code(std::errc::permission_denied));
  for (const auto& term : corpus.vocab()) vout << term << '\n';
}

Corpus filter_vocabulary(const Corpus& corpus, int min_doc_freq) {
  if (min_doc_freq < 1) throw DomainError("min_doc_freq must be at least 1");
  std::vector<int> doc_freq(std::size_t(corpus.vocab_size()), 0);
  for (int j = 0; j < corpus.num_docs(); ++j) {
    for (const auto& tc : corpus.doc(j)) ++doc_freq[std::size_t(tc.term)];
  }
  std::vector<int> remap(doc_freq.size(), -1);
  std::vector<std::string> vocab;
  for (std::size_t v = 0; v < doc_freq.size(); ++v) {
    if (doc_freq[v] >= min_doc_freq) {
      remap[v] = int(vocab.size());
      vocab.push_back(corpus.vocab()[v]);
    }
  }
  if (vocab.empty()) throw CorpusError("vocabulary filter removed every term");

  std::vector<std::vector<TermCount>> docs;
  int dropped = 0;
  for (int j = 0; j < corpus.num_docs(); ++j) {
    std::vector<TermCount> doc;
    for (const auto& tc : corpus.doc(j)) {
      if (remap[std::size_t(tc.term)] >= 0) doc.push_back({remap[std::size_t(tc.term)], tc.count});
    }
    if (doc.empty()) {
      ++dropped;
      continue;
    }
    docs.push_back(std::move(doc));
  }
  if (dropped > 0) std::cerr << "warning: filter_vocabulary dropped " << dropped << " empty document(s)\n";
  if (docs.empty()) throw CorpusError("vocabulary filter left no documents");
  return Corpus(std::move(vocab), std::move(docs));
}

HeldOutSplit split_train_test(const Corpus& corpus, double frac, RandomSource& rng) {
  if (!(frac > 0.0 && frac < 1.0)) throw DomainError("train fraction must lie in (0, 1)");
  HeldOutSplit split;
  split.train_fraction = frac;
  split.train.num_docs = split.test.num_docs = corpus.num_docs();
  split.train.vocab_size = split.test.vocab_size = corpus.vocab_size();
  std::vector<int> tokens;
  for (int j = 0; j < corpus.num_docs(); ++j) {
    tokens.clear();
    for (const auto& tc : corpus.doc(j)) tokens.insert(tokens.end(), std::size_t(tc.count), tc.term);
    const std::size_t n = tokens.size();
    const std::size_t n_train =
        std::max<std::size_t>(1, std::size_t(std::floor(frac * double(n) + 0.5)));
    // Partial Fisher-Yates: the first n_train slots become a uniform subset.
    for (std::size_t i = 0; i < n_train && i + 1 < n; ++i) {
      const std::size_t pick = i + std::size_t(rng.uniform_index(n - i));
      std::swap(tokens[i], tokens[pick]);
    }
    std::sort(tokens.begin(), tokens.begin() + std::ptrdiff_t(n_train));
    std::sort(tokens.begin() + std::ptrdiff_t(n_train), tokens.end());
    split.train.terms.insert(split.train.terms.end(), tokens.begin(), tokens.begin() + std::ptrdiff_t(n_train));
    split.test.terms.insert(split.test.terms.end(), tokens.begin() + std::ptrdiff_t(n_train), tokens.end());
    split.train.offsets.push_back(split.train.terms.size());
    split.test.offsets.push_back(split.test.terms.size());
  }
  return split;
}

std::pair<Corpus, GroundTruth> synthesize_corpus(const SyntheticSpec& spec, RandomSource& rng) {
  if (spec.topics < 1 || spec.vocab_size < 1 || spec.docs < 1) throw DomainError("synthetic dimensions must be positive");
  if (!(spec.topic_concentration > 0.0) || !(spec.r > 0.0)) throw DomainError("synthetic concentration and r must be positive");
  const bool beta_p = spec.p_beta_a > 0.0;
  if (beta_p ? !(spec.p_beta_b > 0.0) : !(spec.p > 0.0 && spec.p < 1.0)) {
    throw DomainError("synthetic p must lie in (0, 1) or come from a proper Beta prior");
  }
  const int K = spec.topics, V = spec.vocab_size, J = spec.docs;

  GroundTruth truth;
  truth.omega.resize(K, V);
  const Eigen::VectorXd eta = Eigen::VectorXd::Constant(V, spec.topic_concentration);
  for (int k = 0; k < K; ++k) truth.omega.row(k) = sample_dirichlet(eta, rng).transpose();
  truth.r_k = Eigen::VectorXd::Constant(K, spec.r);
  truth.p_j.resize(J);
  truth.n_jk = Eigen::MatrixXi::Zero(J, K);

  std::vector<std::vector<TermCount>> docs(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    int attempt = 0;
    for (;;) {
      const double p = beta_p ? sample_beta(spec.p_beta_a, spec.p_beta_b, rng) : spec.p;
      std::int64_t total = 0;
      for (int k = 0; k < K; ++k) {
        truth.n_jk(j, k) = int(sample_nb_direct(truth.r_k(k), p, rng));
        total += truth.n_jk(j, k);
      }
      if (total > 0) {
        truth.p_j(j) = p;
        break;
      }
      if (++attempt > spec.max_retries) throw CorpusError("synthetic document " + std::to_string(j) + " stayed empty");
    }
    std::vector<int> counts(std::size_t(V), 0);
    for (int k = 0; k < K; ++k) {
      for (int i = 0; i < truth.n_jk(j, k); ++i) ++counts[std::size_t(sample_discrete(truth.omega.row(k), rng))];
    }
    for (int v = 0; v < V; ++v) {
      if (counts[std::size_t(v)] > 0) docs[std::size_t(j)].push_back({v, counts[std::size_t(v)]});
    }
  }
  std::vector<std::string> vocab;
  for (int v = 0; v < V; ++v) vocab.push_back("w" + std::to_string(v));
  return {Corpus(std::move(vocab), std::move(docs)), std::move(truth)};
}

}  // namespace nbproc
