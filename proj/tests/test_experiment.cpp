#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "revmine/errors.hpp"
#include "revmine/experiment.hpp"

using namespace revmine;
namespace tst = revmine::testing;

namespace {

ExperimentSpec toy_spec(const EncoderVocab& vocab, size_t runs) {
  ExperimentSpec spec;
  spec.runs_per_setting = runs;
  spec.base_seed = 100;
  spec.encoder_cfg = tst::tiny_encoder(vocab.size(), 24);
  spec.train_cfg.epochs = 1;
  spec.train_cfg.learning_rate = 1e-3;
  spec.train_cfg.max_len = 24;
  return spec;
}

void check_report_shape(const MetricsReport& r) {
  for (const auto& m : r.per_label) {
    CHECK(m.precision >= 0.0);
    CHECK(m.precision <= 1.0);
    CHECK(m.recall >= 0.0);
    CHECK(m.recall <= 1.0);
    CHECK(m.f1 >= 0.0);
    CHECK(m.f1 <= 1.0);
  }
  CHECK(r.n_examples > 0);
}

}  // namespace

TEST_CASE("same-apps protocol emits well-formed per-run reports and a mean") {
  auto vocab = tst::tiny_vocab(24);
  Corpus corpus = tst::toy_corpus(60, 1, 21);
  auto encodings = encode_corpus(corpus, vocab);
  auto spec = toy_spec(vocab, 3);
  spec.protocol = Protocol::same_apps;

  auto result = run_same_apps(spec, corpus, encodings);
  REQUIRE(result.runs.size() == 3);
  for (size_t k = 0; k < result.runs.size(); ++k) {
    check_report_shape(result.runs[k]);
    CHECK(result.runs[k].seed == spec.base_seed + k);
    CHECK(result.runs[k].run_index == static_cast<int>(k));
    CHECK(result.runs[k].n_examples == 12);  // 20% of 60
  }
  check_report_shape(result.mean);
}

TEST_CASE("same-apps with a single run: mean equals that run") {
  auto vocab = tst::tiny_vocab(24);
  Corpus corpus = tst::toy_corpus(40, 1, 3);
  auto encodings = encode_corpus(corpus, vocab);
  auto spec = toy_spec(vocab, 1);

  auto result = run_same_apps(spec, corpus, encodings);
  REQUIRE(result.runs.size() == 1);
  CHECK(result.mean.weighted.f1 == doctest::Approx(result.runs[0].weighted.f1).epsilon(1e-12));
  for (size_t l = 0; l < kNumLabels; ++l)
    CHECK(result.mean.per_label[l].f1 ==
          doctest::Approx(result.runs[0].per_label[l].f1).epsilon(1e-12));
}

TEST_CASE("same-apps runs are reproducible for a fixed base seed") {
  auto vocab = tst::tiny_vocab(24);
  Corpus corpus = tst::toy_corpus(40, 1, 9);
  auto encodings = encode_corpus(corpus, vocab);
  auto spec = toy_spec(vocab, 2);
  auto a = run_same_apps(spec, corpus, encodings);
  auto b = run_same_apps(spec, corpus, encodings);
  for (size_t k = 0; k < a.runs.size(); ++k)
    CHECK(a.runs[k].weighted.f1 == b.runs[k].weighted.f1);
}

TEST_CASE("leave-one-out covers each app and keeps out-domain disjoint") {
  auto vocab = tst::tiny_vocab(24);
  Corpus corpus = tst::toy_corpus(60, 3, 31);  // 3 synthetic apps x 20 reviews
  auto encodings = encode_corpus(corpus, vocab);
  auto spec = toy_spec(vocab, 2);
  spec.protocol = Protocol::leave_one_out;

  auto result = run_leave_one_out(spec, corpus, encodings);
  REQUIRE(result.runs.size() == 3 * 2);

  std::set<std::string> held_out_apps;
  for (const auto& run : result.runs) {
    held_out_apps.insert(run.held_out_app);
    check_report_shape(run.in_domain);
    check_report_shape(run.out_domain);
    // out-domain evaluates every review of the held-out app
    CHECK(run.out_domain.n_examples == 20);
    // nothing the model saw in training overlaps the held-out evaluation set
    std::set<std::string> held_out_ids;
    for (const auto& e : corpus.entries())
      if (e.review.app == run.held_out_app) held_out_ids.insert(e.review.id);
    for (const auto& id : run.train_ids) CHECK_FALSE(held_out_ids.contains(id));
    // in-domain test part: 20% of the two remaining apps' 40 reviews
    CHECK(run.in_domain.n_examples == 8);
  }
  CHECK(held_out_apps.size() == 3);
  check_report_shape(result.in_domain_mean);
  check_report_shape(result.out_domain_mean);
}

TEST_CASE("leave-one-out requires at least 3 apps") {
  auto vocab = tst::tiny_vocab(24);
  Corpus corpus = tst::toy_corpus(30, 2, 5);
  auto encodings = encode_corpus(corpus, vocab);
  auto spec = toy_spec(vocab, 1);
  spec.protocol = Protocol::leave_one_out;
  CHECK_THROWS_AS(run_leave_one_out(spec, corpus, encodings), ArgumentError);
}

TEST_CASE("experiment spec validation") {
  auto vocab = tst::tiny_vocab(24);
  auto spec = toy_spec(vocab, 0);
  CHECK_THROWS_AS(spec.validate(), ArgumentError);
}
