#include "nbproc/geweke.hpp"

#include <algorithm>
#include <cmath>

#include "nbproc/errors.hpp"

namespace nbproc {

GewekeSettings geweke_micro_settings(ModelKind kind) {
  GewekeSettings s;
  HyperParams& h = s.hyper;
  h.K = 2;
  h.eta = 0.5;
  s.num_docs = 2;
  s.vocab_size = 3;
  // Tight hyperpriors keep the tails of N and lambda light, so batch means
  // give honest standard errors for the squared statistics.
  h.a0 = 20.0;
  h.b0 = 20.0;
  h.e0 = 10.0;
  h.f0 = 10.0;
  switch (kind) {
    case ModelKind::kGammaNb:
    case ModelKind::kNbHdp:
    case ModelKind::kMarkedGammaNb:
      h.c = 0.2;
      break;
    case ModelKind::kNbLda:
      h.c = 0.5;
      break;
    case ModelKind::kNbFtm:
      h.c = 1.0;
      break;
    case ModelKind::kBetaNb:
    case ModelKind::kMarkedBetaNb:
      h.c = 40.0;  // p_k ~ Beta(20, 20)
      h.f0 = 5.0;  // r ~ Gamma(10, 1/5)
      break;
    case ModelKind::kCrfHdp:
      h.a0 = 2.0;
      h.b0 = 1.0;
      h.crf_gamma0 = 1.0;
      s.doc_lengths = {6, 4};
      break;
    case ModelKind::kLda:
    case ModelKind::kDirPfa:
      h.lda_alpha_total = 2.0;
      s.doc_lengths = {6, 4};
      break;
  }
  return s;
}

double GewekeReport::max_abs_z() const {
  if (diverged) return INFINITY;
  double m = 0.0;
  for (const auto& s : statistics) m = std::max(m, std::abs(s.z));
  return m;
}

namespace {

struct Summary {
  std::vector<std::string> names;
  std::vector<double> values;
  void add(const std::string& name, double x) {
    names.push_back(name);
    values.push_back(x);
    names.push_back(name + "^2");
    values.push_back(x * x);
  }
};

Summary summarize(const ModelState& s) {
  const ModelTraits t = model_traits(s.kind);
  Summary out;
  out.add("N", double(s.n_jk.sum()));
  out.add("n_00", double(s.n_jk(0, 0)));
  out.add("omega_00", s.omega(0, 0));
  out.add("lambda_00", s.lambda(0, 0));
  if (t.gamma0) out.add("gamma0", s.gamma0);
  if (t.r_k) out.add("sum_r_k", s.r_k.sum());
  if (t.r_j) out.add("sum_r_j", s.r_j.sum());
  if (t.p_k) out.add("mean_p_k", s.p_k.mean());
  if (t.p_j) out.add("mean_p_j", s.p_j.mean());
  if (t.pi_k) out.add("mean_pi_k", s.pi_k.mean());
  if (t.alpha) {
    out.add("alpha", s.alpha);
    out.add("r_tilde_0", s.r_tilde(0));
  }
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (!std::isfinite(out.values[i])) throw Error("geweke: non-finite statistic " + out.names[i]);
  }
  return out;
}

struct Moments {
  std::vector<double> sum, sum_sq;
  explicit Moments(std::size_t n) : sum(n, 0.0), sum_sq(n, 0.0) {}
  void add(const std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum[i] += x[i];
      sum_sq[i] += x[i] * x[i];
    }
  }
};

}  // namespace

GewekeReport geweke_check(ModelKind kind, const GewekeSettings& settings, int num_forward, int num_gibbs,
                          RandomSource& rng) {
  if (num_forward < 1) throw DomainError("geweke: num_forward must be positive");
  if (num_gibbs < std::max(1, settings.batches) || settings.batches < 2) {
    throw DomainError("geweke: num_gibbs must be at least the number of batches (>= 2)");
  }
  settings.hyper.validate();
  const bool normalized = model_traits(kind).normalized_weights;
  if (normalized && int(settings.doc_lengths.size()) != settings.num_docs) {
    throw DomainError("geweke: doc_lengths must give one length per document");
  }

  RandomSource forward_rng = rng.child(0);
  RandomSource gibbs_rng = rng.child(1);
  const HyperParams& hyper = settings.hyper;

  auto draw_joint = [&](RandomSource& r, TokenSet& tokens) {
    ModelState state = sample_prior(kind, settings.num_docs, settings.vocab_size, hyper, r);
    tokens = simulate_tokens(state, settings.doc_lengths, r);
    return state;
  };

  // Marginal-conditional simulator.
  std::vector<std::string> names;
  Moments forward(0);
  for (int i = 0; i < num_forward; ++i) {
    TokenSet tokens;
    const ModelState state = draw_joint(forward_rng, tokens);
    Summary s = summarize(state);
    if (i == 0) {
      names = s.names;
      forward = Moments(names.size());
    }
    forward.add(s.values);
  }

  // Successive-conditional simulator, started from an exact joint draw.
  TokenSet tokens;
  ModelState state = draw_joint(gibbs_rng, tokens);
  const std::size_t m = names.size();
  const int batches = settings.batches;
  const int batch_len = num_gibbs / batches;
  const int used = batch_len * batches;
  std::vector<std::vector<double>> batch_means(std::size_t(batches), std::vector<double>(m, 0.0));
  Moments gibbs(m);
  GewekeReport report;
  for (int i = 0; i < used; ++i) {
    sweep(state, tokens, hyper, gibbs_rng, settings.options);
    if (state.lambda.sum() > double(settings.max_tokens)) {
      report.diverged = true;
      break;
    }
    tokens = simulate_tokens(state, settings.doc_lengths, gibbs_rng);
    Summary s = summarize(state);
    gibbs.add(s.values);
    auto& bm = batch_means[std::size_t(i / batch_len)];
    for (std::size_t k = 0; k < m; ++k) bm[k] += s.values[k] / batch_len;
  }

  report.kind = kind;
  report.num_forward = num_forward;
  report.num_gibbs = used;
  report.threshold = settings.threshold;
  if (report.diverged) return report;
  for (std::size_t k = 0; k < m; ++k) {
    GewekeStatistic st;
    st.name = names[k];
    st.forward_mean = forward.sum[k] / num_forward;
    const double fvar = std::max(0.0, forward.sum_sq[k] / num_forward - st.forward_mean * st.forward_mean);
    st.forward_se = std::sqrt(fvar / num_forward);
    st.gibbs_mean = gibbs.sum[k] / used;
    double ss = 0.0;
    for (const auto& bm : batch_means) ss += (bm[k] - st.gibbs_mean) * (bm[k] - st.gibbs_mean);
    st.gibbs_se = std::sqrt(ss / (batches - 1) / batches);
    const double se = std::hypot(st.forward_se, st.gibbs_se);
    const double diff = st.gibbs_mean - st.forward_mean;
    st.z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
    report.statistics.push_back(st);
  }
  return report;
}

}  // namespace nbproc
