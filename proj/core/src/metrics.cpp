#include "revmine/metrics.hpp"

#include "revmine/errors.hpp"

namespace revmine {

std::array<LabelMetrics, kNumLabels> per_label_metrics(const LabelMatrix& y_true,
                                                       const LabelMatrix& y_pred) {
  if (y_true.size() != y_pred.size())
    throw ArgumentError("label matrices differ in row count: " +
                        std::to_string(y_true.size()) + " vs " +
                        std::to_string(y_pred.size()));

  std::array<LabelMetrics, kNumLabels> out;
  for (size_t l = 0; l < kNumLabels; ++l) {
    int64_t tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < y_true.size(); ++i) {
      bool t = y_true[i][l] != 0;
      bool p = y_pred[i][l] != 0;
      if (t && p) ++tp;
      else if (!t && p) ++fp;
      else if (t && !p) ++fn;
    }
    LabelMetrics& m = out[l];
    m.support = tp + fn;
    if (tp + fp > 0) {
      m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    } else {
      m.zero_division = true;
    }
    if (tp + fn > 0) {
      m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
      m.zero_division = true;
    }
    if (m.precision + m.recall > 0) {
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
      m.zero_division = true;
    }
  }
  return out;
}

WeightedMetrics weighted_average(const std::array<LabelMetrics, kNumLabels>& per_label) {
  int64_t total_support = 0;
  for (const auto& m : per_label) total_support += m.support;
  if (total_support == 0)
    throw ArgumentError("weighted_average: all label supports are zero");

  WeightedMetrics w;
  for (const auto& m : per_label) {
    double weight = static_cast<double>(m.support) / static_cast<double>(total_support);
    w.precision += weight * m.precision;
    w.recall += weight * m.recall;
    w.f1 += weight * m.f1;
  }
  return w;
}

MetricsReport make_report(const LabelMatrix& y_true, const LabelMatrix& y_pred) {
  MetricsReport r;
  r.per_label = per_label_metrics(y_true, y_pred);
  r.weighted = weighted_average(r.per_label);
  r.n_examples = y_true.size();
  return r;
}

MetricsReport aggregate(const std::vector<MetricsReport>& reports) {
  if (reports.empty()) throw ArgumentError("aggregate: no reports");
  MetricsReport agg;
  const double n = static_cast<double>(reports.size());
  for (const auto& r : reports) {
    for (size_t l = 0; l < kNumLabels; ++l) {
      agg.per_label[l].precision += r.per_label[l].precision / n;
      agg.per_label[l].recall += r.per_label[l].recall / n;
      agg.per_label[l].f1 += r.per_label[l].f1 / n;
      agg.per_label[l].support += r.per_label[l].support;
      agg.per_label[l].zero_division =
          agg.per_label[l].zero_division || r.per_label[l].zero_division;
    }
    agg.weighted.precision += r.weighted.precision / n;
    agg.weighted.recall += r.weighted.recall / n;
    agg.weighted.f1 += r.weighted.f1 / n;
    agg.n_examples += r.n_examples;
  }
  agg.protocol = reports.front().protocol;
  agg.apps = reports.front().apps;
  agg.seed = reports.front().seed;
  return agg;
}

}  // namespace revmine
