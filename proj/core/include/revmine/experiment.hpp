#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "revmine/classifier.hpp"
#include "revmine/corpus.hpp"
#include "revmine/encode.hpp"
#include "revmine/metrics.hpp"
#include "revmine/split.hpp"

namespace revmine {

enum class Protocol { same_apps, leave_one_out };

const char* protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name);

struct ExperimentSpec {
  Protocol protocol = Protocol::same_apps;
  size_t runs_per_setting = 10;
  uint64_t base_seed = 0;
  TrainConfig train_cfg;
  EncoderConfig encoder_cfg;
  // When set, every run starts from these weights instead of random init.
  std::optional<std::filesystem::path> pretrained_dir;

  void validate() const;
};

using EncodedCorpus = std::unordered_map<std::string, EncodedReview>;

// Encodes every review text once, keyed by review id.
EncodedCorpus encode_corpus(const Corpus& corpus, const EncoderVocab& vocab);

using ProgressFn = std::function<void(const std::string&)>;

struct SameAppsResult {
  std::vector<MetricsReport> runs;
  MetricsReport mean;
};

// Run k splits with seed base_seed+k, trains on the train part, evaluates on
// the test part. Mean is the flat average over runs.
SameAppsResult run_same_apps(const ExperimentSpec& spec, const Corpus& corpus,
                             const EncodedCorpus& encodings,
                             const ProgressFn& progress = {});

struct LeaveOneOutRun {
  std::string held_out_app;
  int run_index = -1;
  std::vector<std::string> train_ids;  // everything the model saw during training
  MetricsReport in_domain;   // 20% test part of the two training apps
  MetricsReport out_domain;  // every review of the held-out app
};

struct LeaveOneOutResult {
  std::vector<LeaveOneOutRun> runs;
  MetricsReport in_domain_mean;   // flat mean over all runs
  MetricsReport out_domain_mean;
};

// One combination per app held out; each combination runs runs_per_setting
// times on a 60/20/20 stratified split of the remaining apps' reviews.
LeaveOneOutResult run_leave_one_out(const ExperimentSpec& spec, const Corpus& corpus,
                                    const EncodedCorpus& encodings,
                                    const ProgressFn& progress = {});

}  // namespace revmine
