#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "revmine/corpus.hpp"

namespace revmine {

// One row of a binary label matrix, kLabelNames order.
using LabelRow = std::array<uint8_t, kNumLabels>;
using LabelMatrix = std::vector<LabelRow>;

struct LabelMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int64_t support = 0;
  // set when a zero denominator forced a metric to 0
  bool zero_division = false;
};

struct WeightedMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  std::array<LabelMetrics, kNumLabels> per_label;
  WeightedMetrics weighted;
  size_t n_examples = 0;

  // run metadata
  std::string protocol;
  std::vector<std::string> apps;
  uint64_t seed = 0;
  int run_index = -1;
};

// Columnwise precision/recall/F1 with supports. Zero denominators yield 0 and
// set the zero_division flag.
std::array<LabelMetrics, kNumLabels> per_label_metrics(const LabelMatrix& y_true,
                                                       const LabelMatrix& y_pred);

// Support-weighted mean of each metric; throws when all supports are zero.
WeightedMetrics weighted_average(const std::array<LabelMetrics, kNumLabels>& per_label);

MetricsReport make_report(const LabelMatrix& y_true, const LabelMatrix& y_pred);

// Flat arithmetic mean of each metric over the runs; supports are summed for
// bookkeeping. Throws on empty input.
MetricsReport aggregate(const std::vector<MetricsReport>& reports);

inline LabelRow to_row(const LabelSet& ls) {
  LabelRow r;
  for (size_t i = 0; i < kNumLabels; ++i) r[i] = ls[i] ? 1 : 0;
  return r;
}

}  // namespace revmine
