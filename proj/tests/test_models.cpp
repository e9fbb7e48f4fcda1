#include <doctest.h>

#include <cmath>
#include <limits>

#include "nbproc/errors.hpp"
#include "nbproc/models.hpp"

using namespace nbproc;

namespace {

HeldOutSplit small_split(std::uint64_t seed = 1) {
  SyntheticSpec spec;
  spec.topics = 3;
  spec.docs = 12;
  spec.vocab_size = 15;
  spec.r = 2.0;
  spec.p = 0.8;
  RandomSource rng(seed);
  const Corpus c = synthesize_corpus(spec, rng).first;
  return split_train_test(c, 0.7, rng);
}

HyperParams small_hyper() {
  HyperParams h;
  h.K = 6;
  h.iters = 10;
  h.burnin = 5;
  h.init_iters = 5;
  return h;
}

void check_counts(const ModelState& s, const TokenSet& train) {
  REQUIRE(s.z.size() == train.size());
  CHECK(s.n_jk.sum() == int(train.size()));
  CHECK(s.n_kv.sum() == int(train.size()));
  for (int j = 0; j < train.num_docs; ++j) CHECK(s.n_jk.row(j).sum() == int(train.doc_size(j)));
  for (int k : s.z) {
    CHECK(k >= 0);
    CHECK(k < s.num_topics);
  }
  for (int k = 0; k < s.num_topics; ++k) CHECK(s.omega.row(k).sum() == doctest::Approx(1.0).epsilon(1e-9));
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("model names round-trip") {
  for (ModelKind kind : kAllModelKinds) CHECK(parse_model_kind(model_name(kind)) == kind);
  CHECK_THROWS_AS(parse_model_kind("gamma_nb"), ConfigError);
}

TEST_CASE("hyperparameter defaults and validation") {
  HyperParams h;
  CHECK(h.c == 1.0);
  CHECK(h.eta == 0.05);
  CHECK(h.K == 400);
  CHECK(h.iters == 2500);
  CHECK(h.iters - h.burnin == 1500);
  CHECK(h.init_iters == 50);
  h.validate();
  h.burnin = h.iters;
  CHECK_THROWS_AS(h.validate(), ConfigError);
  h = HyperParams{};
  h.eta = 0.0;
  CHECK_THROWS_AS(h.validate(), ConfigError);
}

TEST_CASE("initialization is reproducible and consistent") {
  const HeldOutSplit split = small_split();
  const HyperParams h = small_hyper();
  RandomSource a(5), b(5);
  const ModelState s1 = initialize(ModelKind::kGammaNb, split.train, h, a);
  const ModelState s2 = initialize(ModelKind::kGammaNb, split.train, h, b);
  CHECK(s1.z == s2.z);
  CHECK(s1.lambda == s2.lambda);
  CHECK(s1.omega == s2.omega);
  check_counts(s1, split.train);
}

TEST_CASE("every kernel keeps the state finite and the counts consistent") {
  const HeldOutSplit split = small_split();
  const HyperParams h = small_hyper();
  for (ModelKind kind : kAllModelKinds) {
    CAPTURE(model_name(kind));
    RandomSource rng(9);
    ModelState s = initialize(kind, split.train, h, rng);
    for (int it = 0; it < 20; ++it) sweep(s, split.train, h, rng);
    check_finite(s);
    check_counts(s, split.train);
    CHECK((s.lambda.array() >= 0.0).all());
    const ModelTraits t = model_traits(kind);
    if (t.normalized_weights) {
      for (int j = 0; j < s.num_docs; ++j) CHECK(s.lambda.row(j).sum() == doctest::Approx(1.0).epsilon(1e-9));
    }
    if (t.p_j) CHECK(((s.p_j.array() > 0.0) && (s.p_j.array() < 1.0)).all());
    if (t.p_k) CHECK(((s.p_k.array() > 0.0) && (s.p_k.array() < 1.0)).all());
    if (t.r_k) CHECK((s.r_k.array() > 0.0).all());
    if (t.r_j) CHECK((s.r_j.array() > 0.0).all());
    if (t.gamma0) CHECK(s.gamma0 > 0.0);
    if (kind == ModelKind::kCrfHdp) {
      CHECK(s.r_tilde.sum() == doctest::Approx(1.0));
      CHECK(s.alpha > 0.0);
    }
  }
}

TEST_CASE("nb-hdp and nb-ftm hold p_j at one half") {
  const HeldOutSplit split = small_split();
  const HyperParams h = small_hyper();
  for (ModelKind kind : {ModelKind::kNbHdp, ModelKind::kNbFtm}) {
    RandomSource rng(2);
    ModelState s = initialize(kind, split.train, h, rng);
    for (int it = 0; it < 10; ++it) sweep(s, split.train, h, rng);
    CHECK((s.p_j.array() == 0.5).all());
  }
}

TEST_CASE("nb-ftm gates are on wherever a topic is used and lambda vanishes where they are off") {
  const HeldOutSplit split = small_split();
  const HyperParams h = small_hyper();
  RandomSource rng(3);
  ModelState s = initialize(ModelKind::kNbFtm, split.train, h, rng);
  for (int it = 0; it < 30; ++it) {
    sweep(s, split.train, h, rng);
    for (int j = 0; j < s.num_docs; ++j) {
      for (int k = 0; k < s.num_topics; ++k) {
        if (s.n_jk(j, k) > 0) CHECK(s.b_jk(j, k) == 1);
        if (s.b_jk(j, k) == 0) CHECK(s.lambda(j, k) == 0.0);
      }
    }
  }
}

TEST_CASE("topic assignment never picks a topic with zero weight") {
  const HeldOutSplit split = small_split();
  RandomSource rng(4);
  ModelState s = make_state(ModelKind::kGammaNb, split.train.num_docs, 3, split.train.vocab_size);
  s.omega.setConstant(1.0 / split.train.vocab_size);
  s.lambda.setOnes();
  s.lambda.col(1).setZero();
  s.z.assign(split.train.size(), 0);
  sample_topic_assignments(s, split.train, rng);
  CHECK(s.n_jk.col(1).sum() == 0);
  CHECK(count_active_topics(s) == 2);
}

TEST_CASE("parallel z-sampling yields a valid, reproducible state") {
  const HeldOutSplit split = small_split();
  const HyperParams h = small_hyper();
  SweepOptions opt;
  opt.workers = 4;
  RandomSource a(8), b(8);
  ModelState s1 = initialize(ModelKind::kGammaNb, split.train, h, a, opt);
  ModelState s2 = initialize(ModelKind::kGammaNb, split.train, h, b, opt);
  for (int it = 0; it < 5; ++it) {
    sweep(s1, split.train, h, a, opt);
    sweep(s2, split.train, h, b, opt);
  }
  check_counts(s1, split.train);
  CHECK(s1.z == s2.z);
}

TEST_CASE("fault injection changes the chain") {
  const HeldOutSplit split = small_split();
  const HyperParams h = small_hyper();
  RandomSource a(6), b(6);
  ModelState good = initialize(ModelKind::kGammaNb, split.train, h, a);
  ModelState bad = initialize(ModelKind::kGammaNb, split.train, h, b);
  REQUIRE(good.r_k == bad.r_k);
  SweepOptions fault;
  fault.fault = Fault::kRShapePlusOne;
  for (int it = 0; it < 5; ++it) {
    sweep(good, split.train, h, a);
    sweep(bad, split.train, h, b, fault);
  }
  CHECK(good.r_k != bad.r_k);
}

TEST_CASE("check_finite names the offending field") {
  ModelState s = make_state(ModelKind::kGammaNb, 2, 2, 3);
  check_finite(s);
  s.r_k(1) = std::numeric_limits<double>::quiet_NaN();
  try {
    check_finite(s);
    FAIL("expected IterationError");
  } catch (const IterationError& e) {
    CHECK(e.variable() == "r_k");
  }
}

TEST_CASE("prior draws respect model structure") {
  HyperParams h;
  h.K = 4;
  RandomSource rng(10);
  const ModelState hdp = sample_prior(ModelKind::kNbHdp, 3, 5, h, rng);
  CHECK((hdp.p_j.array() == 0.5).all());
  const ModelState ftm = sample_prior(ModelKind::kNbFtm, 3, 5, h, rng);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 4; ++k) {
      if (ftm.b_jk(j, k) == 0) CHECK(ftm.lambda(j, k) == 0.0);
    }
  }
  const ModelState lda = sample_prior(ModelKind::kLda, 3, 5, h, rng);
  for (int j = 0; j < 3; ++j) CHECK(lda.lambda.row(j).sum() == doctest::Approx(1.0));
  h.K = 1;
  CHECK_THROWS_AS(sample_prior(ModelKind::kBetaNb, 3, 5, h, rng), DomainError);
}

TEST_CASE("simulate_tokens keeps fixed lengths for normalized models") {
  HyperParams h;
  h.K = 3;
  RandomSource rng(12);
  ModelState s = sample_prior(ModelKind::kCrfHdp, 2, 4, h, rng);
  const TokenSet t = simulate_tokens(s, {7, 3}, rng);
  CHECK(t.doc_size(0) == 7);
  CHECK(t.doc_size(1) == 3);
  CHECK(s.n_jk.sum() == 10);
  CHECK_THROWS_AS(simulate_tokens(s, {1}, rng), DomainError);
}

TEST_CASE("single-topic truncation still runs for beta-process models") {
  const HeldOutSplit split = small_split();
  HyperParams h = small_hyper();
  h.K = 1;
  for (ModelKind kind : {ModelKind::kBetaNb, ModelKind::kMarkedBetaNb, ModelKind::kNbFtm}) {
    RandomSource rng(1);
    ModelState s = initialize(kind, split.train, h, rng);
    for (int it = 0; it < 5; ++it) sweep(s, split.train, h, rng);
    check_finite(s);
    CHECK(count_active_topics(s) == 1);
  }
}

}
