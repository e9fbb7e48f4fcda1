#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "internal.hpp"
#include "nbproc/errors.hpp"

namespace nbproc {
namespace {

void assign_document(ModelState& state, const TokenSet& train, int j, RandomSource& rng,
                     std::vector<double>& cumulative) {
  const int K = state.num_topics;
  const auto doc = train.doc(j);
  const std::size_t base = train.offsets[std::size_t(j)];
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const int v = doc[i];
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
      total += state.omega(k, v) * state.lambda(j, k);
      cumulative[std::size_t(k)] = total;
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw Error("topic weights of document " + std::to_string(j) + " are degenerate");
    }
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.begin() + K, u);
    int k = int(it - cumulative.begin());
    if (k >= K) k = K - 1;
    // Skip zero-weight topics that share the boundary value.
    while (k > 0 && state.omega(k, v) * state.lambda(j, k) == 0.0) --k;
    state.z[base + i] = k;
  }
}

}  // namespace

ModelState make_state(ModelKind kind, int num_docs, int num_topics, int vocab_size) {
  ModelState s;
  s.kind = kind;
  s.num_docs = num_docs;
  s.num_topics = num_topics;
  s.vocab_size = vocab_size;
  s.omega = Eigen::MatrixXd::Constant(num_topics, vocab_size, 1.0 / vocab_size);
  s.lambda = Eigen::MatrixXd::Ones(num_docs, num_topics);
  s.n_jk = Eigen::MatrixXi::Zero(num_docs, num_topics);
  s.n_kv = Eigen::MatrixXi::Zero(num_topics, vocab_size);
  s.r_k = Eigen::VectorXd::Ones(num_topics);
  s.r_j = Eigen::VectorXd::Ones(num_docs);
  s.p_k = Eigen::VectorXd::Constant(num_topics, 0.5);
  s.p_j = Eigen::VectorXd::Constant(num_docs, 0.5);
  s.pi_k = Eigen::VectorXd::Constant(num_topics, 0.5);
  s.b_jk = Eigen::MatrixXi::Ones(num_docs, num_topics);
  s.l_jk = Eigen::MatrixXi::Zero(num_docs, num_topics);
  s.l_prime = Eigen::VectorXi::Zero(kind == ModelKind::kNbLda ? num_docs : num_topics);
  s.p_prime_vec = Eigen::VectorXd::Constant(kind == ModelKind::kNbLda ? num_docs : num_topics, 0.5);
  s.r_tilde = Eigen::VectorXd::Constant(num_topics, 1.0 / num_topics);
  return s;
}

void sample_topic_assignments(ModelState& state, const TokenSet& train, RandomSource& rng, int workers) {
  state.z.resize(train.size());
  const int J = state.num_docs;
  if (workers <= 1 || J < 2) {
    std::vector<double> cumulative(std::size_t(state.num_topics));
    for (int j = 0; j < J; ++j) assign_document(state, train, j, rng, cumulative);
  } else {
    // Documents are conditionally independent given omega and lambda; each
    // gets its own child stream so the result does not depend on scheduling.
    const RandomSource base(rng.next_u64());
    const int n_workers = std::min(workers, J);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          std::vector<double> cumulative(std::size_t(state.num_topics));
          for (int j = w; j < J; j += n_workers) {
            RandomSource doc_rng = base.child(std::uint64_t(j));
            assign_document(state, train, j, doc_rng, cumulative);
          }
        } catch (...) {
          errors[std::size_t(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  recount(state, train);
}

void update_topics(ModelState& state, double eta, RandomSource& rng) {
  Eigen::VectorXd concentration(state.vocab_size);
  Eigen::VectorXd draw(state.vocab_size);
  for (int k = 0; k < state.num_topics; ++k) {
    concentration = state.n_kv.row(k).transpose().cast<double>().array() + eta;
    sample_dirichlet_into(concentration, rng, draw);
    state.omega.row(k) = draw.transpose();
  }
}

int count_active_topics(const ModelState& state) {
  if (state.n_jk.size() == 0) return 0;
  return int((state.n_jk.colwise().sum().array() > 0).count());
}

void check_finite(const ModelState& state) {
  auto check = [](const auto& x, const char* name) {
    if (!x.allFinite()) throw IterationError(name);
  };
  check(state.omega, "omega");
  check(state.lambda, "lambda");
  check(state.r_k, "r_k");
  check(state.r_j, "r_j");
  check(state.p_k, "p_k");
  check(state.p_j, "p_j");
  check(state.pi_k, "pi_k");
  check(state.r_tilde, "r_tilde");
  if (!std::isfinite(state.gamma0)) throw IterationError("gamma0");
  if (!std::isfinite(state.alpha)) throw IterationError("alpha");
  if (!std::isfinite(state.p_prime)) throw IterationError("p_prime");
}

}  // namespace nbproc
