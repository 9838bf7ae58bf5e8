#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "revmine/corpus.hpp"
#include "revmine/encode.hpp"

namespace revmine {

// Logit order follows kLabelNames: (rating, bug_report, feature_request,
// user_experience).
using LabelLogits = std::array<double, kNumLabels>;
using LabelProbs = std::array<double, kNumLabels>;

struct EncoderConfig {
  size_t vocab_size = 0;
  size_t hidden = 768;
  size_t layers = 12;
  size_t heads = 12;
  size_t ffn = 3072;
  size_t max_len = 512;

  void validate() const;
  bool operator==(const EncoderConfig&) const = default;
};

struct TrainConfig {
  size_t epochs = 3;
  size_t batch_size = 1;
  double learning_rate = 2e-5;
  double weight_decay = 0.01;
  uint64_t seed = 42;
  double threshold = 0.5;
  size_t max_len = 512;
  size_t gradient_accumulation = 1;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct EpochLog {
  double train_loss = 0.0;
  double val_loss = 0.0;
};

using TrainExample = std::pair<EncodedReview, LabelSet>;

// Transformer encoder with a 4-output linear head on the first-token
// representation. All parameters live in one flat vector so the optimizer,
// serialization and finite-difference checks address them uniformly.
class Model {
 public:
  static Model random_init(const EncoderConfig& cfg, uint64_t seed);

  const EncoderConfig& config() const { return cfg_; }
  const TrainConfig& train_config() const { return train_cfg_; }
  void set_train_config(const TrainConfig& tc) { train_cfg_ = tc; }

  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }

  // Flat-vector span of the classification head (hidden x 4 weights + 4 biases).
  size_t head_offset() const;
  size_t head_param_count() const { return cfg_.hidden * kNumLabels + kNumLabels; }

  LabelLogits predict_logits(const EncodedReview& enc) const;
  LabelProbs predict_proba(const EncodedReview& enc) const;
  LabelSet predict_labels(const EncodedReview& enc, double threshold = 0.5) const;

  // Loss for one example with gradient accumulated into `grad` (same length as
  // params). Used by the training loop and the gradient checker.
  double loss_and_grad(const EncodedReview& enc, const LabelSet& target,
                       Eigen::VectorXd& grad) const;

 private:
  friend Model load_model(const std::filesystem::path& dir);
  Model() = default;

  EncoderConfig cfg_;
  TrainConfig train_cfg_;
  Eigen::VectorXd params_;
};

// Total parameter count implied by an encoder configuration.
size_t parameter_count(const EncoderConfig& cfg);

nlohmann::json encoder_config_to_json(const EncoderConfig& c);
EncoderConfig encoder_config_from_json(const nlohmann::json& j);
nlohmann::json train_config_to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);

// Mean binary cross-entropy over the 4 labels, log-sum-exp form.
double multilabel_loss(const LabelLogits& logits, const LabelSet& target);

// Runs cfg.epochs seeded-shuffle passes with AdamW; returns per-epoch mean
// train loss and val loss. Modifies the model in place.
std::vector<EpochLog> train(Model& model, const std::vector<TrainExample>& train_set,
                            const std::vector<TrainExample>& val_set,
                            const TrainConfig& cfg);

// Max relative error between analytic and central-finite-difference gradients
// over the head parameters (step 1e-4).
double gradient_check(const Model& model, const EncodedReview& enc,
                      const LabelSet& target);

void save_model(const Model& model, const std::filesystem::path& dir);
Model load_model(const std::filesystem::path& dir);

}  // namespace revmine
