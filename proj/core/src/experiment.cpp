#include "revmine/experiment.hpp"

#include <algorithm>

#include "revmine/errors.hpp"

namespace revmine {

const char* protocol_name(Protocol p) {
  return p == Protocol::same_apps ? "same_apps" : "leave_one_out";
}

Protocol protocol_from_name(const std::string& name) {
  if (name == "same_apps") return Protocol::same_apps;
  if (name == "leave_one_out") return Protocol::leave_one_out;
  throw ArgumentError("unknown protocol '" + name + "'");
}

void ExperimentSpec::validate() const {
  if (runs_per_setting < 1) throw ArgumentError("runs_per_setting must be >= 1");
  train_cfg.validate();
  encoder_cfg.validate();
}

EncodedCorpus encode_corpus(const Corpus& corpus, const EncoderVocab& vocab) {
  EncodedCorpus out;
  out.reserve(corpus.size());
  for (const auto& e : corpus.entries())
    out.emplace(e.review.id, encode_review(e.review.text, vocab));
  return out;
}

namespace {

std::vector<TrainExample> to_examples(const std::vector<const LabeledReview*>& entries,
                                      const EncodedCorpus& encodings) {
  std::vector<TrainExample> out;
  out.reserve(entries.size());
  for (const auto* e : entries)
    out.emplace_back(encodings.at(e->review.id), e->labels);
  return out;
}

MetricsReport evaluate(const Model& model, const std::vector<const LabeledReview*>& entries,
                       const EncodedCorpus& encodings, double threshold) {
  LabelMatrix y_true, y_pred;
  y_true.reserve(entries.size());
  y_pred.reserve(entries.size());
  for (const auto* e : entries) {
    y_true.push_back(to_row(e->labels));
    y_pred.push_back(to_row(model.predict_labels(encodings.at(e->review.id), threshold)));
  }
  return make_report(y_true, y_pred);
}

Model init_model(const ExperimentSpec& spec, uint64_t seed) {
  if (spec.pretrained_dir) return load_model(*spec.pretrained_dir);
  return Model::random_init(spec.encoder_cfg, seed);
}

struct RunOutput {
  Model model;
  SplitAssignment split;
};

RunOutput train_one(const ExperimentSpec& spec, const Corpus& corpus,
                    const EncodedCorpus& encodings, uint64_t seed) {
  SplitAssignment split = stratified_split(corpus, {0.6, 0.2, 0.2}, seed);
  auto train_set = to_examples(part_entries(corpus, split, Part::train), encodings);
  auto val_set = to_examples(part_entries(corpus, split, Part::val), encodings);

  Model model = init_model(spec, seed);
  TrainConfig cfg = spec.train_cfg;
  cfg.seed = seed;
  train(model, train_set, val_set, cfg);
  return {std::move(model), std::move(split)};
}

void report_progress(const ProgressFn& progress, const std::string& msg) {
  if (progress) progress(msg);
}

}  // namespace

SameAppsResult run_same_apps(const ExperimentSpec& spec, const Corpus& corpus,
                             const EncodedCorpus& encodings, const ProgressFn& progress) {
  spec.validate();
  if (corpus.apps().empty()) throw ArgumentError("corpus has no apps");

  SameAppsResult result;
  std::vector<std::string> apps(corpus.apps().begin(), corpus.apps().end());
  for (size_t k = 0; k < spec.runs_per_setting; ++k) {
    uint64_t seed = spec.base_seed + k;
    report_progress(progress, "same_apps run " + std::to_string(k + 1) + "/" +
                                  std::to_string(spec.runs_per_setting) +
                                  " (seed " + std::to_string(seed) + ")");
    RunOutput run = train_one(spec, corpus, encodings, seed);
    MetricsReport r = evaluate(run.model, part_entries(corpus, run.split, Part::test),
                               encodings, spec.train_cfg.threshold);
    r.protocol = protocol_name(Protocol::same_apps);
    r.apps = apps;
    r.seed = seed;
    r.run_index = static_cast<int>(k);
    result.runs.push_back(std::move(r));
  }
  result.mean = aggregate(result.runs);
  result.mean.run_index = -1;
  return result;
}

LeaveOneOutResult run_leave_one_out(const ExperimentSpec& spec, const Corpus& corpus,
                                    const EncodedCorpus& encodings,
                                    const ProgressFn& progress) {
  spec.validate();
  if (corpus.apps().size() < 3)
    throw ArgumentError("leave-one-app-out requires at least 3 apps, got " +
                        std::to_string(corpus.apps().size()));

  std::vector<std::string> apps(corpus.apps().begin(), corpus.apps().end());
  LeaveOneOutResult result;
  std::vector<MetricsReport> in_reports, out_reports;

  for (size_t c = 0; c < apps.size(); ++c) {
    const std::string& held_out = apps[c];
    std::vector<std::string> train_apps;
    std::vector<LabeledReview> train_entries;
    std::vector<const LabeledReview*> held_out_entries;
    for (const auto& e : corpus.entries()) {
      if (e.review.app == held_out)
        held_out_entries.push_back(&e);
      else
        train_entries.push_back(e);
    }
    for (const auto& a : apps)
      if (a != held_out) train_apps.push_back(a);
    Corpus subcorpus(std::move(train_entries));

    for (size_t k = 0; k < spec.runs_per_setting; ++k) {
      uint64_t seed = spec.base_seed + c * spec.runs_per_setting + k;
      report_progress(progress, "leave_one_out holding out '" + held_out + "', run " +
                                    std::to_string(k + 1) + "/" +
                                    std::to_string(spec.runs_per_setting) +
                                    " (seed " + std::to_string(seed) + ")");
      RunOutput run = train_one(spec, subcorpus, encodings, seed);

      LeaveOneOutRun lr;
      lr.held_out_app = held_out;
      lr.run_index = static_cast<int>(k);
      lr.train_ids = run.split.ids_in(Part::train);
      auto val_ids = run.split.ids_in(Part::val);
      lr.train_ids.insert(lr.train_ids.end(), val_ids.begin(), val_ids.end());
      lr.in_domain = evaluate(run.model, part_entries(subcorpus, run.split, Part::test),
                              encodings, spec.train_cfg.threshold);
      lr.in_domain.protocol = "leave_one_out/in_domain";
      lr.in_domain.apps = train_apps;
      lr.in_domain.seed = seed;
      lr.in_domain.run_index = lr.run_index;
      lr.out_domain = evaluate(run.model, held_out_entries, encodings,
                               spec.train_cfg.threshold);
      lr.out_domain.protocol = "leave_one_out/out_domain";
      lr.out_domain.apps = {held_out};
      lr.out_domain.seed = seed;
      lr.out_domain.run_index = lr.run_index;

      in_reports.push_back(lr.in_domain);
      out_reports.push_back(lr.out_domain);
      result.runs.push_back(std::move(lr));
    }
  }
  result.in_domain_mean = aggregate(in_reports);
  result.in_domain_mean.apps = apps;
  result.out_domain_mean = aggregate(out_reports);
  result.out_domain_mean.apps = apps;
  return result;
}

}  // namespace revmine
