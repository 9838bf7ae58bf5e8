#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "revmine/classifier.hpp"
#include "revmine/errors.hpp"

namespace revmine {

namespace {

// Decoupled weight decay Adam (beta1=0.9, beta2=0.999, eps=1e-8).
class AdamW {
 public:
  AdamW(Eigen::Index n, double lr, double weight_decay)
      : lr_(lr), wd_(weight_decay),
        m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)) {}

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
    ++t_;
    m_ = kBeta1 * m_ + (1.0 - kBeta1) * grad;
    v_ = kBeta2 * v_.array() + (1.0 - kBeta2) * grad.array().square();
    double bc1 = 1.0 - std::pow(kBeta1, t_);
    double bc2 = 1.0 - std::pow(kBeta2, t_);
    params.array() -=
        lr_ * ((m_.array() / bc1) / ((v_.array() / bc2).sqrt() + kEps) +
               wd_ * params.array());
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  double lr_, wd_;
  int t_ = 0;
  Eigen::VectorXd m_, v_;
};

double mean_val_loss(const Model& model, const std::vector<TrainExample>& val_set) {
  if (val_set.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [enc, target] : val_set)
    sum += multilabel_loss(model.predict_logits(enc), target);
  return sum / static_cast<double>(val_set.size());
}

}  // namespace

std::vector<EpochLog> train(Model& model, const std::vector<TrainExample>& train_set,
                            const std::vector<TrainExample>& val_set,
                            const TrainConfig& cfg) {
  cfg.validate();
  if (train_set.empty()) throw ArgumentError("training set is empty");
  if (cfg.max_len != model.config().max_len)
    throw ArgumentError("TrainConfig max_len does not match model");

  model.set_train_config(cfg);
  AdamW opt(model.params().size(), cfg.learning_rate, cfg.weight_decay);
  std::mt19937_64 rng(cfg.seed);

  std::vector<size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  const size_t effective_batch = cfg.batch_size * cfg.gradient_accumulation;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(model.params().size());

  std::vector<EpochLog> log;
  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    size_t in_batch = 0;
    for (size_t idx : order) {
      const auto& [enc, target] = train_set[idx];
      double loss = model.loss_and_grad(enc, target, grad);
      if (!std::isfinite(loss))
        throw NumericError("non-finite training loss at epoch " +
                           std::to_string(epoch + 1));
      epoch_loss += loss;
      if (++in_batch == effective_batch) {
        grad /= static_cast<double>(in_batch);
        opt.step(model.params(), grad);
        grad.setZero();
        in_batch = 0;
      }
    }
    if (in_batch > 0) {
      grad /= static_cast<double>(in_batch);
      opt.step(model.params(), grad);
      grad.setZero();
    }
    log.push_back({epoch_loss / static_cast<double>(train_set.size()),
                   mean_val_loss(model, val_set)});
  }
  return log;
}

namespace {
constexpr char kWeightsMagic[8] = {'R', 'E', 'V', 'M', 'I', 'N', 'E', '1'};
}  // namespace

nlohmann::json encoder_config_to_json(const EncoderConfig& c) {
  return {{"vocab_size", c.vocab_size}, {"hidden", c.hidden},  {"layers", c.layers},
          {"heads", c.heads},           {"ffn", c.ffn},        {"max_len", c.max_len}};
}

EncoderConfig encoder_config_from_json(const nlohmann::json& j) {
  EncoderConfig c;
  c.vocab_size = j.value("vocab_size", c.vocab_size);
  c.hidden = j.value("hidden", c.hidden);
  c.layers = j.value("layers", c.layers);
  c.heads = j.value("heads", c.heads);
  c.ffn = j.value("ffn", c.ffn);
  c.max_len = j.value("max_len", c.max_len);
  return c;
}

nlohmann::json train_config_to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate},
          {"weight_decay", c.weight_decay},
          {"seed", c.seed},
          {"threshold", c.threshold},
          {"max_len", c.max_len},
          {"gradient_accumulation", c.gradient_accumulation}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.weight_decay = j.value("weight_decay", c.weight_decay);
  c.seed = j.value("seed", c.seed);
  c.threshold = j.value("threshold", c.threshold);
  c.max_len = j.value("max_len", c.max_len);
  c.gradient_accumulation = j.value("gradient_accumulation", c.gradient_accumulation);
  return c;
}

void save_model(const Model& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  nlohmann::json cfg = {{"encoder", encoder_config_to_json(model.config())},
                        {"train", train_config_to_json(model.train_config())},
                        {"label_order", kLabelNames}};
  std::ofstream cfg_out(dir / "config.json", std::ios::binary);
  if (!cfg_out) throw IoError("cannot write " + (dir / "config.json").string());
  cfg_out << cfg.dump(2) << '\n';

  std::ofstream w(dir / "weights.bin", std::ios::binary);
  if (!w) throw IoError("cannot write " + (dir / "weights.bin").string());
  w.write(kWeightsMagic, sizeof(kWeightsMagic));
  uint64_t n = static_cast<uint64_t>(model.params().size());
  w.write(reinterpret_cast<const char*>(&n), sizeof(n));
  w.write(reinterpret_cast<const char*>(model.params().data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!w) throw IoError("write failed: " + (dir / "weights.bin").string());
}

Model load_model(const std::filesystem::path& dir) {
  auto cfg_path = dir / "config.json";
  std::ifstream cfg_in(cfg_path, std::ios::binary);
  if (!cfg_in) throw NotFoundError("model load: missing " + cfg_path.string());
  nlohmann::json cfg;
  try {
    cfg_in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("model load: corrupt config.json: " + std::string(e.what()));
  }

  Model m;
  m.cfg_ = encoder_config_from_json(cfg.at("encoder"));
  m.cfg_.validate();
  m.train_cfg_ = train_config_from_json(cfg.value("train", nlohmann::json::object()));

  auto w_path = dir / "weights.bin";
  std::ifstream w(w_path, std::ios::binary);
  if (!w) throw NotFoundError("model load: missing " + w_path.string());
  char magic[8];
  w.read(magic, sizeof(magic));
  if (!w || std::memcmp(magic, kWeightsMagic, sizeof(magic)) != 0)
    throw SchemaError("model load: bad magic in " + w_path.string());
  uint64_t n = 0;
  w.read(reinterpret_cast<char*>(&n), sizeof(n));
  m.params_.resize(static_cast<Eigen::Index>(n));
  w.read(reinterpret_cast<char*>(m.params_.data()),
         static_cast<std::streamsize>(n * sizeof(double)));
  if (!w) throw SchemaError("model load: truncated " + w_path.string());

  if (parameter_count(m.cfg_) != n)
    throw SchemaError("model load: weight count does not match config");
  return m;
}

}  // namespace revmine
