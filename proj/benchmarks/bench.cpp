#include <benchmark/benchmark.h>

#include <random>

#include "revmine/classifier.hpp"
#include "revmine/corpus.hpp"
#include "revmine/encode.hpp"
#include "revmine/metrics.hpp"
#include "revmine/split.hpp"

using namespace revmine;

#ifndef REVMINE_SOURCE_DIR
#error "REVMINE_SOURCE_DIR must be defined by the build"
#endif

namespace {

const Corpus& corpus() {
  static Corpus c = load_corpus(std::string(REVMINE_SOURCE_DIR) + "/data/reviews_fr.csv");
  return c;
}

const EncoderVocab& vocab() {
  static EncoderVocab v =
      EncoderVocab::load(std::string(REVMINE_SOURCE_DIR) + "/data/vocab_fr.txt", 512);
  return v;
}

const EncoderVocab& short_vocab() {
  static EncoderVocab v =
      EncoderVocab::load(std::string(REVMINE_SOURCE_DIR) + "/data/vocab_fr.txt", 128);
  return v;
}

void BM_Tokenize(benchmark::State& state) {
  const auto& c = corpus();
  const auto& v = vocab();
  size_t i = 0, bytes = 0;
  for (auto _ : state) {
    const auto& text = c.entries()[i++ % c.size()].review.text;
    benchmark::DoNotOptimize(v.tokenize(text));
    bytes += text.size();
  }
  state.SetBytesProcessed(static_cast<int64_t>(bytes));
}
BENCHMARK(BM_Tokenize);

void BM_EncodeReview(benchmark::State& state) {
  const auto& c = corpus();
  const auto& v = vocab();
  size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(encode_review(c.entries()[i++ % c.size()].review.text, v));
}
BENCHMARK(BM_EncodeReview);

void BM_StratifiedSplit(benchmark::State& state) {
  const auto& c = corpus();
  uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(stratified_split(c, {0.6, 0.2, 0.2}, seed++));
}
BENCHMARK(BM_StratifiedSplit);

void BM_PerLabelMetrics(benchmark::State& state) {
  std::mt19937_64 rng(1);
  size_t n = static_cast<size_t>(state.range(0));
  LabelMatrix y_true(n), y_pred(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < kNumLabels; ++l) {
      y_true[i][l] = rng() & 1;
      y_pred[i][l] = rng() & 1;
    }
  for (auto _ : state) benchmark::DoNotOptimize(per_label_metrics(y_true, y_pred));
}
BENCHMARK(BM_PerLabelMetrics)->Arg(1200)->Arg(6000);

void BM_ForwardTiny(benchmark::State& state) {
  const auto& v = short_vocab();
  EncoderConfig cfg;
  cfg.vocab_size = v.size();
  cfg.hidden = 64;
  cfg.layers = 2;
  cfg.heads = 4;
  cfg.ffn = 128;
  cfg.max_len = 128;
  auto model = Model::random_init(cfg, 1);
  auto enc = encode_review(corpus().entries()[0].review.text, v);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_logits(enc));
}
BENCHMARK(BM_ForwardTiny);

void BM_TrainStepTiny(benchmark::State& state) {
  const auto& v = short_vocab();
  EncoderConfig cfg;
  cfg.vocab_size = v.size();
  cfg.hidden = 64;
  cfg.layers = 2;
  cfg.heads = 4;
  cfg.ffn = 128;
  cfg.max_len = 128;
  auto model = Model::random_init(cfg, 1);
  auto enc = encode_review(corpus().entries()[0].review.text, v);
  LabelSet target = corpus().entries()[0].labels;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(model.params().size());
  for (auto _ : state) {
    grad.setZero();
    benchmark::DoNotOptimize(model.loss_and_grad(enc, target, grad));
  }
}
BENCHMARK(BM_TrainStepTiny);

}  // namespace

BENCHMARK_MAIN();
