// Command-line surface tying the pipeline together:
//   revmine ingest      fetch reviews from the app store into a raw CSV
//   revmine stats       per-app label count matrix for a corpus
//   revmine train       single stratified-split training run
//   revmine experiment  same-apps or leave-one-app-out protocol
//   revmine classify    label reviews with a trained checkpoint
//
// Exit codes: 0 success, 2 usage/config/data error, 3 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "revmine/classifier.hpp"
#include "revmine/corpus.hpp"
#include "revmine/encode.hpp"
#include "revmine/errors.hpp"
#include "revmine/experiment.hpp"
#include "revmine/hash.hpp"
#include "revmine/ingest.hpp"
#include "revmine/manifest.hpp"
#include "revmine/report.hpp"
#include "revmine/split.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Relative asset paths that do not exist locally are also tried under
// $REVMINE_ASSET_DIR.
fs::path resolve_asset(const fs::path& p) {
  if (fs::exists(p) || p.is_absolute()) return p;
  if (const char* dir = std::getenv("REVMINE_ASSET_DIR")) {
    fs::path alt = fs::path(dir) / p;
    if (fs::exists(alt)) return alt;
  }
  return p;
}

struct ToolConfig {
  fs::path vocab;
  revmine::EncoderConfig encoder;
  revmine::TrainConfig train;
  revmine::Protocol protocol = revmine::Protocol::same_apps;
  size_t runs = 10;
  uint64_t base_seed = 0;
  std::optional<fs::path> pretrained_dir;
  json raw;
};

ToolConfig load_tool_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw revmine::IoError("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw revmine::SchemaError("bad config file " + path.string() + ": " + e.what());
  }
  ToolConfig c;
  c.raw = j;
  c.vocab = j.value("vocab", std::string("data/vocab_fr.txt"));
  if (j.contains("encoder")) c.encoder = revmine::encoder_config_from_json(j["encoder"]);
  if (j.contains("train")) c.train = revmine::train_config_from_json(j["train"]);
  if (j.contains("protocol"))
    c.protocol = revmine::protocol_from_name(j["protocol"].get<std::string>());
  c.runs = j.value("runs", c.runs);
  c.base_seed = j.value("base_seed", c.base_seed);
  if (j.contains("pretrained_dir") && !j["pretrained_dir"].is_null())
    c.pretrained_dir = fs::path(j["pretrained_dir"].get<std::string>());
  return c;
}

revmine::EncoderVocab load_vocab_for(ToolConfig& cfg) {
  auto vocab = revmine::EncoderVocab::load(resolve_asset(cfg.vocab), cfg.encoder.max_len);
  if (cfg.encoder.vocab_size == 0) cfg.encoder.vocab_size = vocab.size();
  cfg.train.max_len = cfg.encoder.max_len;
  return vocab;
}

json probs_to_json(const revmine::LabelProbs& p, const revmine::LabelSet& labels) {
  json probs = json::object(), flags = json::object();
  for (size_t l = 0; l < revmine::kNumLabels; ++l) {
    probs[revmine::kLabelNames[l]] = p[l];
    flags[revmine::kLabelNames[l]] = labels[l];
  }
  return {{"probabilities", probs}, {"labels", flags}};
}

int cmd_ingest(const std::string& app_id, const std::string& lang, size_t max_reviews,
               const fs::path& out, const std::string& fixture, const std::string& host,
               size_t page_size, double rate_limit) {
  revmine::FetchSpec spec(app_id, max_reviews, lang, page_size, rate_limit);
  auto transport = fixture.empty() ? revmine::make_https_transport(host)
                                   : revmine::make_fixture_transport(fixture);
  revmine::PlayStoreClient client(std::move(transport), revmine::make_system_clock());
  auto reviews = client.fetch_reviews(spec);
  revmine::export_raw(reviews, out);
  std::cout << "fetched " << reviews.size() << " reviews for " << app_id << " -> "
            << out.string() << "\n";
  return 0;
}

int cmd_stats(const fs::path& corpus_path) {
  auto corpus = revmine::load_corpus(corpus_path);
  std::cout << "App Total rating bug_report feature_request user_experience\n";
  for (const auto& app : corpus.apps()) {
    auto lc = revmine::label_counts(corpus, app);
    std::cout << app << " " << lc.total;
    for (auto c : lc.counts) std::cout << " " << c;
    std::cout << "\n";
  }
  auto all = revmine::label_counts(corpus);
  std::cout << "Total " << all.total;
  for (auto c : all.counts) std::cout << " " << c;
  std::cout << "\n";
  return 0;
}

int cmd_train(const fs::path& corpus_path, const fs::path& config_path,
              const fs::path& out_dir, std::optional<uint64_t> seed_override) {
  ToolConfig cfg = load_tool_config(config_path);
  if (seed_override) cfg.base_seed = *seed_override;
  auto vocab = load_vocab_for(cfg);
  auto corpus = revmine::load_corpus(corpus_path);
  auto encodings = revmine::encode_corpus(corpus, vocab);

  revmine::RunManifest manifest;
  manifest.started_at = revmine::utc_timestamp_now();
  manifest.corpus_sha256 = revmine::sha256_file(corpus_path);
  manifest.seeds = {cfg.base_seed};

  auto split = revmine::stratified_split(corpus, {0.6, 0.2, 0.2}, cfg.base_seed);
  auto to_examples = [&](revmine::Part p) {
    std::vector<revmine::TrainExample> out;
    for (const auto* e : revmine::part_entries(corpus, split, p))
      out.emplace_back(encodings.at(e->review.id), e->labels);
    return out;
  };

  revmine::Model model =
      cfg.pretrained_dir ? revmine::load_model(resolve_asset(*cfg.pretrained_dir))
                         : revmine::Model::random_init(cfg.encoder, cfg.base_seed);
  revmine::TrainConfig tc = cfg.train;
  tc.seed = cfg.base_seed;
  auto log = revmine::train(model, to_examples(revmine::Part::train),
                            to_examples(revmine::Part::val), tc);
  for (size_t e = 0; e < log.size(); ++e)
    std::cout << "epoch " << e + 1 << ": train_loss=" << log[e].train_loss
              << " val_loss=" << log[e].val_loss << "\n";

  fs::create_directories(out_dir);
  fs::path ckpt = out_dir / "checkpoint";
  revmine::save_model(model, ckpt);
  fs::copy_file(resolve_asset(cfg.vocab), ckpt / "vocab.txt",
                fs::copy_options::overwrite_existing);

  revmine::LabelMatrix y_true, y_pred;
  for (const auto* e : revmine::part_entries(corpus, split, revmine::Part::test)) {
    y_true.push_back(revmine::to_row(e->labels));
    y_pred.push_back(revmine::to_row(
        model.predict_labels(encodings.at(e->review.id), tc.threshold)));
  }
  auto report = revmine::make_report(y_true, y_pred);
  report.protocol = "train";
  report.seed = cfg.base_seed;
  revmine::write_json_file(revmine::report_to_json(report), out_dir / "metrics.json");
  revmine::write_text_file(revmine::render_table(report), out_dir / "metrics.txt");

  json split_json = json::object();
  for (auto p : {revmine::Part::train, revmine::Part::val, revmine::Part::test})
    split_json[revmine::kPartNames[static_cast<size_t>(p)]] = split.ids_in(p);
  manifest.config = {{"tool_config", cfg.raw},
                     {"resolved_train", revmine::train_config_to_json(tc)},
                     {"resolved_encoder", revmine::encoder_config_to_json(cfg.encoder)},
                     {"split", split_json}};
  manifest.output_paths = {ckpt.string(), (out_dir / "metrics.json").string()};
  manifest.finished_at = revmine::utc_timestamp_now();
  manifest.write(out_dir / "manifest.json");
  std::cout << revmine::render_table(report);
  return 0;
}

int cmd_experiment(const fs::path& corpus_path, const fs::path& config_path,
                   const std::string& protocol_flag, const fs::path& out_dir,
                   std::optional<size_t> runs_override,
                   std::optional<uint64_t> seed_override) {
  ToolConfig cfg = load_tool_config(config_path);
  if (!protocol_flag.empty()) cfg.protocol = revmine::protocol_from_name(protocol_flag);
  if (runs_override) cfg.runs = *runs_override;
  if (seed_override) cfg.base_seed = *seed_override;
  auto vocab = load_vocab_for(cfg);
  auto corpus = revmine::load_corpus(corpus_path);
  auto encodings = revmine::encode_corpus(corpus, vocab);

  revmine::ExperimentSpec spec;
  spec.protocol = cfg.protocol;
  spec.runs_per_setting = cfg.runs;
  spec.base_seed = cfg.base_seed;
  spec.train_cfg = cfg.train;
  spec.encoder_cfg = cfg.encoder;
  if (cfg.pretrained_dir) spec.pretrained_dir = resolve_asset(*cfg.pretrained_dir);

  revmine::RunManifest manifest;
  manifest.started_at = revmine::utc_timestamp_now();
  manifest.corpus_sha256 = revmine::sha256_file(corpus_path);

  fs::create_directories(out_dir);
  auto progress = [](const std::string& msg) { std::cerr << msg << "\n"; };

  if (cfg.protocol == revmine::Protocol::same_apps) {
    auto result = revmine::run_same_apps(spec, corpus, encodings, progress);
    for (const auto& r : result.runs) {
      manifest.seeds.push_back(r.seed);
      auto p = out_dir / revmine::report_filename(r);
      revmine::write_json_file(revmine::report_to_json(r), p);
      manifest.output_paths.push_back(p.string());
    }
    auto p = out_dir / revmine::report_filename(result.mean);
    revmine::write_json_file(revmine::report_to_json(result.mean), p);
    revmine::write_text_file(revmine::render_table(result.mean), out_dir / "aggregate.txt");
    manifest.output_paths.push_back(p.string());
    std::cout << revmine::render_table(result.mean);
  } else {
    auto result = revmine::run_leave_one_out(spec, corpus, encodings, progress);
    for (const auto& run : result.runs) {
      manifest.seeds.push_back(run.in_domain.seed);
      for (const auto* r : {&run.in_domain, &run.out_domain}) {
        auto p = out_dir / revmine::report_filename(*r);
        revmine::write_json_file(revmine::report_to_json(*r), p);
        manifest.output_paths.push_back(p.string());
      }
    }
    revmine::write_json_file(revmine::report_to_json(result.in_domain_mean),
                             out_dir / "leave_one_out_in_domain_aggregate.json");
    revmine::write_json_file(revmine::report_to_json(result.out_domain_mean),
                             out_dir / "leave_one_out_out_domain_aggregate.json");
    std::string tables = "In-domain (mean over runs)\n" +
                         revmine::render_table(result.in_domain_mean) +
                         "\nOut-of-domain (mean over runs)\n" +
                         revmine::render_table(result.out_domain_mean);
    revmine::write_text_file(tables, out_dir / "aggregate.txt");
    std::cout << tables;
  }
  manifest.config = {{"tool_config", cfg.raw},
                     {"protocol", revmine::protocol_name(cfg.protocol)},
                     {"runs", cfg.runs},
                     {"base_seed", cfg.base_seed},
                     {"resolved_train", revmine::train_config_to_json(cfg.train)},
                     {"resolved_encoder", revmine::encoder_config_to_json(cfg.encoder)}};
  manifest.finished_at = revmine::utc_timestamp_now();
  manifest.write(out_dir / "manifest.json");
  return 0;
}

int cmd_classify(const fs::path& model_dir, const std::string& input, double threshold) {
  auto model = revmine::load_model(model_dir);
  auto vocab_path = model_dir / "vocab.txt";
  if (!fs::exists(vocab_path))
    throw revmine::NotFoundError("model load: missing " + vocab_path.string());
  auto vocab = revmine::EncoderVocab::load(vocab_path, model.config().max_len);

  struct Item {
    std::string id, text;
  };
  std::vector<Item> items;
  if (fs::exists(input)) {
    if (fs::path(input).extension() == ".csv") {
      for (const auto& r : revmine::load_raw_reviews(input)) items.push_back({r.id, r.text});
    } else {
      std::ifstream in(input, std::ios::binary);
      std::string line;
      size_t n = 0;
      while (std::getline(in, line))
        if (!line.empty()) items.push_back({"line-" + std::to_string(n++), line});
    }
  } else {
    items.push_back({"arg-0", input});
  }

  for (const auto& item : items) {
    auto enc = revmine::encode_review(item.text, vocab);
    json rec = probs_to_json(model.predict_proba(enc),
                             model.predict_labels(enc, threshold));
    rec["id"] = item.id;
    rec["text"] = item.text;
    std::cout << rec.dump() << "\n";
  }
  return 0;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const revmine::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const revmine::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const revmine::IntegrityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const revmine::NotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const revmine::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"French app-review multi-label classification pipeline"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Fetch reviews from the app store");
  std::string app_id, lang = "fr", fixture, host = "https://play.google.com";
  size_t max_reviews = 100, page_size = 40;
  double rate_limit = 1.0;
  std::string ingest_out = "reviews_raw.csv";
  ingest->add_option("--app-id", app_id, "Store package id")->required();
  ingest->add_option("--lang", lang, "IETF language tag");
  ingest->add_option("--max", max_reviews, "Maximum reviews to fetch");
  ingest->add_option("--page-size", page_size, "Reviews per page");
  ingest->add_option("--rate-limit", rate_limit, "Max requests per second");
  ingest->add_option("--out", ingest_out, "Output CSV path");
  ingest->add_option("--fixture", fixture, "Recorded-response fixture file (offline)");
  ingest->add_option("--host", host, "Store host");

  // stats
  auto* stats = app.add_subcommand("stats", "Per-app label count matrix");
  std::string corpus_path;
  stats->add_option("--corpus", corpus_path, "Corpus CSV path")->required();

  // train
  auto* train_cmd = app.add_subcommand("train", "Single stratified-split training run");
  std::string train_corpus, train_config, train_out = "train_out";
  std::optional<uint64_t> seed_flag;
  train_cmd->add_option("--corpus", train_corpus, "Corpus CSV path")->required();
  train_cmd->add_option("--config", train_config, "Config JSON path")->required();
  train_cmd->add_option("--out", train_out, "Output directory");
  train_cmd->add_option("--seed", seed_flag, "Override base seed");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run an evaluation protocol");
  std::string exp_corpus, exp_config, exp_protocol, exp_out = "experiment_out";
  std::optional<size_t> runs_flag;
  std::optional<uint64_t> exp_seed_flag;
  exp->add_option("--corpus", exp_corpus, "Corpus CSV path")->required();
  exp->add_option("--config", exp_config, "Config JSON path")->required();
  exp->add_option("--protocol", exp_protocol, "same_apps | leave_one_out");
  exp->add_option("--out", exp_out, "Output directory");
  exp->add_option("--runs", runs_flag, "Override runs per setting");
  exp->add_option("--seed", exp_seed_flag, "Override base seed");

  // classify
  auto* classify = app.add_subcommand("classify", "Label reviews with a checkpoint");
  std::string model_dir, classify_input;
  double threshold = 0.5;
  classify->add_option("--model", model_dir, "Checkpoint directory")->required();
  classify->add_option("input", classify_input, "Input file (CSV or text lines) or literal text")
      ->required();
  classify->add_option("--threshold", threshold, "Decision threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (ingest->parsed())
    return guarded([&] {
      return cmd_ingest(app_id, lang, max_reviews, ingest_out, fixture, host, page_size,
                        rate_limit);
    });
  if (stats->parsed()) return guarded([&] { return cmd_stats(corpus_path); });
  if (train_cmd->parsed())
    return guarded([&] { return cmd_train(train_corpus, train_config, train_out, seed_flag); });
  if (exp->parsed())
    return guarded([&] {
      return cmd_experiment(exp_corpus, exp_config, exp_protocol, exp_out, runs_flag,
                            exp_seed_flag);
    });
  if (classify->parsed())
    return guarded([&] { return cmd_classify(model_dir, classify_input, threshold); });
  return 2;
}
