#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "revmine/errors.hpp"
#include "revmine/metrics.hpp"

using namespace revmine;

namespace {

// Independent brute-force oracle: recount TP/FP/FN per label from scratch.
struct OracleResult {
  double precision, recall, f1;
  int64_t support;
};

OracleResult oracle_label(const LabelMatrix& y_true, const LabelMatrix& y_pred, size_t l) {
  double tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i][l] && y_pred[i][l]) tp += 1;
    if (!y_true[i][l] && y_pred[i][l]) fp += 1;
    if (y_true[i][l] && !y_pred[i][l]) fn += 1;
  }
  OracleResult r{};
  r.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0
             ? 2 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  r.support = static_cast<int64_t>(tp + fn);
  return r;
}

LabelMatrix random_matrix(std::mt19937_64& rng, size_t n) {
  LabelMatrix m(n);
  for (auto& row : m)
    for (auto& cell : row) cell = rng() % 2;
  return m;
}

}  // namespace

TEST_CASE("perfect predictions give P=R=F1=1 on every label") {
  LabelMatrix y = {{1, 0, 1, 1}, {0, 1, 0, 1}, {1, 1, 1, 0}, {1, 1, 1, 1}};
  auto m = per_label_metrics(y, y);
  for (size_t l = 0; l < kNumLabels; ++l) {
    CHECK(m[l].precision == 1.0);
    CHECK(m[l].recall == 1.0);
    CHECK(m[l].f1 == 1.0);
    CHECK_FALSE(m[l].zero_division);
  }
}

TEST_CASE("hand-built 6x4 case matches the brute-force oracle exactly") {
  LabelMatrix y_true = {{1, 0, 0, 1}, {1, 1, 0, 0}, {0, 1, 1, 0},
                        {0, 0, 1, 1}, {1, 0, 0, 0}, {0, 1, 0, 1}};
  LabelMatrix y_pred = {{1, 0, 1, 1}, {0, 1, 0, 0}, {0, 1, 1, 1},
                        {0, 0, 0, 1}, {1, 1, 0, 0}, {1, 1, 0, 0}};
  auto m = per_label_metrics(y_true, y_pred);
  for (size_t l = 0; l < kNumLabels; ++l) {
    auto o = oracle_label(y_true, y_pred, l);
    CHECK(m[l].precision == doctest::Approx(o.precision).epsilon(1e-12));
    CHECK(m[l].recall == doctest::Approx(o.recall).epsilon(1e-12));
    CHECK(m[l].f1 == doctest::Approx(o.f1).epsilon(1e-12));
    CHECK(m[l].support == o.support);
  }
}

TEST_CASE("randomized matrices match the oracle within 1e-12") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    size_t n = 1 + rng() % 50;
    auto y_true = random_matrix(rng, n);
    auto y_pred = random_matrix(rng, n);
    auto m = per_label_metrics(y_true, y_pred);
    for (size_t l = 0; l < kNumLabels; ++l) {
      auto o = oracle_label(y_true, y_pred, l);
      CHECK(std::abs(m[l].precision - o.precision) < 1e-12);
      CHECK(std::abs(m[l].recall - o.recall) < 1e-12);
      CHECK(std::abs(m[l].f1 - o.f1) < 1e-12);
      CHECK(m[l].support == o.support);
    }
  }
}

TEST_CASE("metric range and F1 ordering properties") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = 1 + rng() % 30;
    auto m = per_label_metrics(random_matrix(rng, n), random_matrix(rng, n));
    for (const auto& lm : m) {
      CHECK(lm.precision >= 0.0);
      CHECK(lm.precision <= 1.0);
      CHECK(lm.recall >= 0.0);
      CHECK(lm.recall <= 1.0);
      CHECK(lm.f1 >= 0.0);
      CHECK(lm.f1 <= 1.0);
      if (lm.precision == 0.0 && lm.recall == 0.0) {
        CHECK(lm.f1 == 0.0);
      } else {
        CHECK(lm.f1 >= std::min(lm.precision, lm.recall) - 1e-12);
        CHECK(lm.f1 <= std::max(lm.precision, lm.recall) + 1e-12);
      }
    }
  }
}

TEST_CASE("shape mismatch throws") {
  CHECK_THROWS_AS(per_label_metrics(LabelMatrix(3), LabelMatrix(4)), ArgumentError);
}

TEST_CASE("zero denominators yield 0 with the flag set") {
  // label 0 never predicted and never true -> all denominators empty
  LabelMatrix y_true = {{0, 1, 1, 1}, {0, 1, 0, 1}};
  LabelMatrix y_pred = {{0, 1, 1, 1}, {0, 0, 1, 0}};
  auto m = per_label_metrics(y_true, y_pred);
  CHECK(m[0].precision == 0.0);
  CHECK(m[0].recall == 0.0);
  CHECK(m[0].f1 == 0.0);
  CHECK(m[0].zero_division);
  CHECK_FALSE(m[1].zero_division);
}

TEST_CASE("weighted_average basics") {
  std::array<LabelMetrics, kNumLabels> per_label{};
  SUBCASE("equal supports, F1 pattern (1,0,1,0) -> 0.5") {
    for (size_t l = 0; l < kNumLabels; ++l) {
      per_label[l].support = 10;
      per_label[l].f1 = (l % 2 == 0) ? 1.0 : 0.0;
    }
    CHECK(weighted_average(per_label).f1 == doctest::Approx(0.5));
  }
  SUBCASE("single nonzero support dominates") {
    per_label[2].support = 7;
    per_label[2].precision = 0.6;
    per_label[2].recall = 0.4;
    per_label[2].f1 = 0.48;
    auto w = weighted_average(per_label);
    CHECK(w.precision == doctest::Approx(0.6));
    CHECK(w.recall == doctest::Approx(0.4));
    CHECK(w.f1 == doctest::Approx(0.48));
  }
  SUBCASE("all supports zero throws") {
    CHECK_THROWS_AS(weighted_average(per_label), ArgumentError);
  }
  SUBCASE("uniform supports equal the unweighted mean") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<> u(0, 1);
    double mean_f1 = 0;
    for (size_t l = 0; l < kNumLabels; ++l) {
      per_label[l].support = 5;
      per_label[l].f1 = u(rng);
      mean_f1 += per_label[l].f1 / kNumLabels;
    }
    CHECK(weighted_average(per_label).f1 == doctest::Approx(mean_f1).epsilon(1e-12));
  }
}

TEST_CASE("published per-label table recombines to weighted F1 near 0.89") {
  // Same-apps per-label results with whole-corpus supports.
  std::array<LabelMetrics, kNumLabels> per_label{};
  const double p[] = {0.88, 0.92, 0.85, 0.81};
  const double r[] = {0.93, 0.93, 0.83, 0.73};
  const double f[] = {0.91, 0.93, 0.84, 0.77};
  const int64_t s[] = {3652, 2067, 1040, 1131};
  for (size_t l = 0; l < kNumLabels; ++l) {
    per_label[l].precision = p[l];
    per_label[l].recall = r[l];
    per_label[l].f1 = f[l];
    per_label[l].support = s[l];
  }
  auto w = weighted_average(per_label);
  CHECK(w.f1 == doctest::Approx(0.89).epsilon(0.012));
  CHECK(w.precision == doctest::Approx(0.88).epsilon(0.012));
  CHECK(w.recall == doctest::Approx(0.89).epsilon(0.012));
}

TEST_CASE("aggregate") {
  MetricsReport a, b;
  for (size_t l = 0; l < kNumLabels; ++l) {
    a.per_label[l] = {0.8, 0.8, 0.8, 10, false};
    b.per_label[l] = {0.9, 0.9, 0.9, 12, false};
  }
  a.weighted = {0.8, 0.8, 0.8};
  b.weighted = {0.9, 0.9, 0.9};
  a.n_examples = b.n_examples = 5;

  SUBCASE("identical reports aggregate to themselves") {
    auto agg = aggregate({a, a});
    CHECK(agg.weighted.f1 == doctest::Approx(0.8));
    CHECK(agg.per_label[0].support == 20);
  }
  SUBCASE("two reports average") {
    auto agg = aggregate({a, b});
    CHECK(agg.weighted.f1 == doctest::Approx(0.85));
  }
  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(aggregate({}), ArgumentError);
  }
  SUBCASE("random reports match an independent mean within 1e-12") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<> u(0, 1);
    std::vector<MetricsReport> reports(10);
    double mean_wf1 = 0;
    for (auto& rep : reports) {
      rep.weighted.f1 = u(rng);
      mean_wf1 += rep.weighted.f1 / 10.0;
      for (size_t l = 0; l < kNumLabels; ++l) rep.per_label[l].support = 1;
    }
    CHECK(std::abs(aggregate(reports).weighted.f1 - mean_wf1) < 1e-12);
  }
}
