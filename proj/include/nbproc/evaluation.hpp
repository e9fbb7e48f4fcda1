#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nbproc/corpus.hpp"
#include "nbproc/state.hpp"

namespace nbproc {

/// Running sums over collected Gibbs samples s of
///   sum_k omega_vk^(s) lambda_jk^(s)            (J x V)
///   sum_v sum_k omega_vk^(s) lambda_jk^(s)      (per document)
/// whose ratio is the predictive term probability f_jv.
class SampleAccumulator {
 public:
  SampleAccumulator() = default;
  SampleAccumulator(int num_docs, int vocab_size);

  int num_samples() const noexcept { return num_samples_; }
  const Eigen::MatrixXd& sum_omega_lambda() const noexcept { return sum_omega_lambda_; }
  const Eigen::VectorXd& sum_total() const noexcept { return sum_total_; }

  /// Adds the current sample's omega * lambda products.
  void add(const ModelState& state);

  /// Adds another accumulator's samples (chains merged at the end).
  void merge(const SampleAccumulator& other);

  /// f_jv; requires num_samples() >= 1.
  double predictive(int j, int v) const;

 private:
  int num_samples_ = 0;
  Eigen::MatrixXd sum_omega_lambda_;
  Eigen::VectorXd sum_total_;
};

SampleAccumulator& accumulate(SampleAccumulator& acc, const ModelState& state);

/// exp(-(1/N_test) sum over held-out tokens of ln f_{j, v}). Documents
/// without held-out tokens contribute nothing. Throws EvaluationError when
/// there are no held-out tokens or a held-out token has f = 0.
double heldout_perplexity(const SampleAccumulator& acc, const TokenSet& test);

/// Same quantity from the current state alone (one-sample accumulator),
/// evaluated only at the held-out tokens.
double instantaneous_perplexity(const ModelState& state, const TokenSet& test);

/// One row of the parameter dump. Empty optionals are not defined for the model.
struct ParameterRow {
  std::string entity;  // "topic" or "document"
  int rank = 0;        // 0 = most words
  int index = 0;
  long words = 0;
  std::optional<double> r, p, pi;
};

/// Topics then documents, each sorted by associated training-word count
/// (descending, ties by index). Topics carry r_k / p_k / pi_k and documents
/// r_j / p_j, as the model defines them.
std::vector<ParameterRow> summarize_parameters(const ModelState& state);

void write_parameters_csv(std::ostream& out, const std::vector<ParameterRow>& rows, const std::string& config_hash);

struct TraceRecord {
  int iteration = 0;
  double perplexity = 0.0;  // collected-sample perplexity once sampling starts, else current-state
  int active_topics = 0;
  double dispersion_total = 0.0;  // sum of r_k or r_j, alpha for CRF-HDP
  double mean_p = 0.0;
  double gamma0 = 0.0;
};

struct TraceReport {
  std::vector<TraceRecord> records;
  double final_perplexity = 0.0;
  int final_active_topics = 0;
  double wall_seconds = 0.0;
};

TraceRecord make_trace_record(int iteration, double perplexity, const ModelState& state);

void write_trace_csv(std::ostream& out, const TraceReport& report, const std::string& config_hash);

}  // namespace nbproc
