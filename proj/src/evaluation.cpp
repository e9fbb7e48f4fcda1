#include "nbproc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "nbproc/errors.hpp"
#include "nbproc/models.hpp"

namespace nbproc {

SampleAccumulator::SampleAccumulator(int num_docs, int vocab_size)
    : sum_omega_lambda_(Eigen::MatrixXd::Zero(num_docs, vocab_size)), sum_total_(Eigen::VectorXd::Zero(num_docs)) {}

void SampleAccumulator::add(const ModelState& state) {
  if (state.lambda.rows() != sum_omega_lambda_.rows() || state.omega.cols() != sum_omega_lambda_.cols() ||
      state.lambda.cols() != state.omega.rows()) {
    throw Error("accumulate: dimension mismatch");
  }
  // Omega rows sum to one, so the per-document total is sum_k lambda_jk up to rounding;
  // the explicit row sum keeps sum_total consistent with the matrix.
  const Eigen::MatrixXd product = state.lambda * state.omega;
  sum_omega_lambda_ += product;
  sum_total_ += product.rowwise().sum();
  ++num_samples_;
}

void SampleAccumulator::merge(const SampleAccumulator& other) {
  const bool sized = sum_omega_lambda_.size() > 0 && other.sum_omega_lambda_.size() > 0;
  if (sized && (other.sum_omega_lambda_.rows() != sum_omega_lambda_.rows() ||
                other.sum_omega_lambda_.cols() != sum_omega_lambda_.cols())) {
    throw Error("merge: dimension mismatch");
  }
  if (other.num_samples_ == 0) return;
  if (num_samples_ == 0) {
    *this = other;
    return;
  }
  sum_omega_lambda_ += other.sum_omega_lambda_;
  sum_total_ += other.sum_total_;
  num_samples_ += other.num_samples_;
}

double SampleAccumulator::predictive(int j, int v) const {
  if (num_samples_ == 0) throw EvaluationError("no samples accumulated");
  return sum_omega_lambda_(j, v) / sum_total_(j);
}

SampleAccumulator& accumulate(SampleAccumulator& acc, const ModelState& state) {
  acc.add(state);
  return acc;
}

namespace {

template <typename ProbFn>
double perplexity_over(const TokenSet& test, ProbFn prob) {
  double log_sum = 0.0;
  std::size_t count = 0;
  for (int j = 0; j < test.num_docs; ++j) {
    for (int v : test.doc(j)) {
      const double f = prob(j, v);
      if (!(f > 0.0) || !std::isfinite(f)) {
        throw EvaluationError("predictive probability of held-out token is " + std::to_string(f));
      }
      log_sum += std::log(f);
      ++count;
    }
  }
  if (count == 0) throw EvaluationError("no held-out tokens");
  return std::exp(-log_sum / double(count));
}

}  // namespace

double heldout_perplexity(const SampleAccumulator& acc, const TokenSet& test) {
  if (acc.num_samples() == 0) throw EvaluationError("no samples accumulated");
  return perplexity_over(test, [&](int j, int v) { return acc.predictive(j, v); });
}

double instantaneous_perplexity(const ModelState& state, const TokenSet& test) {
  const Eigen::VectorXd totals = state.lambda * state.omega.rowwise().sum();
  return perplexity_over(test, [&](int j, int v) { return state.lambda.row(j).dot(state.omega.col(v)) / totals(j); });
}

std::vector<ParameterRow> summarize_parameters(const ModelState& state) {
  const ModelTraits traits = model_traits(state.kind);
  const bool fixed_half_p = state.kind == ModelKind::kNbHdp || state.kind == ModelKind::kNbFtm;
  const Eigen::VectorXi topic_words = state.n_jk.colwise().sum().transpose();
  const Eigen::VectorXi doc_words = state.n_jk.rowwise().sum();

  auto order = [](const Eigen::VectorXi& words) {
    std::vector<int> idx(std::size_t(words.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return words(a) > words(b); });
    return idx;
  };

  std::vector<ParameterRow> rows;
  int rank = 0;
  for (int k : order(topic_words)) {
    ParameterRow row{"topic", rank++, k, topic_words(k), {}, {}, {}};
    if (traits.r_k) row.r = state.r_k(k);
    if (traits.p_k) row.p = state.p_k(k);
    if (traits.pi_k) row.pi = state.pi_k(k);
    rows.push_back(row);
  }
  rank = 0;
  for (int j : order(doc_words)) {
    ParameterRow row{"document", rank++, j, doc_words(j), {}, {}, {}};
    if (traits.r_j) row.r = state.r_j(j);
    if (traits.p_j || fixed_half_p) row.p = state.p_j(j);
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string opt_columns(const std::optional<double>& x) {
  if (!x) return ",";
  return fmt(*x) + "," + fmt(std::log(*x));
}

}  // namespace

void write_parameters_csv(std::ostream& out, const std::vector<ParameterRow>& rows, const std::string& config_hash) {
  out << "config_hash,entity,rank,index,words,r,log_r,p,log_p,pi,log_pi\n";
  for (const auto& row : rows) {
    out << config_hash << ',' << row.entity << ',' << row.rank << ',' << row.index << ',' << row.words << ','
        << opt_columns(row.r) << ',' << opt_columns(row.p) << ',' << opt_columns(row.pi) << '\n';
  }
}

TraceRecord make_trace_record(int iteration, double perplexity, const ModelState& state) {
  const ModelTraits traits = model_traits(state.kind);
  TraceRecord rec;
  rec.iteration = iteration;
  rec.perplexity = perplexity;
  rec.active_topics = count_active_topics(state);
  if (traits.alpha) {
    rec.dispersion_total = state.alpha;
  } else if (traits.r_j) {
    rec.dispersion_total = state.r_j.sum();
  } else if (traits.normalized_weights) {
    rec.dispersion_total = 0.0;
  } else {
    rec.dispersion_total = state.r_k.sum();
  }
  rec.mean_p = traits.p_k ? state.p_k.mean() : state.p_j.mean();
  rec.gamma0 = state.gamma0;
  return rec;
}

void write_trace_csv(std::ostream& out, const TraceReport& report, const std::string& config_hash) {
  out << "config_hash,iteration,perplexity,active_topics,dispersion_total,mean_p,gamma0\n";
  for (const auto& r : report.records) {
    out << config_hash << ',' << r.iteration << ',' << fmt(r.perplexity) << ',' << r.active_topics << ','
        << fmt(r.dispersion_total) << ',' << fmt(r.mean_p) << ',' << fmt(r.gamma0) << '\n';
  }
}

}  // namespace nbproc
