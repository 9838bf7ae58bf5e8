#pragma once

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "revmine/classifier.hpp"
#include "revmine/corpus.hpp"
#include "revmine/encode.hpp"

namespace revmine::testing {

#ifndef REVMINE_SOURCE_DIR
#error "REVMINE_SOURCE_DIR must be defined by the build"
#endif

inline std::filesystem::path source_dir() { return REVMINE_SOURCE_DIR; }
inline std::filesystem::path dataset_path() { return source_dir() / "data/reviews_fr.csv"; }
inline std::filesystem::path vocab_path() { return source_dir() / "data/vocab_fr.txt"; }

// Small vocabulary with byte fallback; enough for any input.
inline EncoderVocab tiny_vocab(size_t max_len = 16) {
  std::vector<std::string> pieces = {"<s>", "<pad>", "</s>", "<unk>"};
  for (int b = 0; b < 256; ++b) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "<0x%02X>", b);
    pieces.emplace_back(buf);
  }
  for (const char* p : {"\xe2\x96\x81tr\xc3\xa8s", "\xe2\x96\x81"
                        "bien", "\xe2\x96\x81"
                        "app", "li", "\xe2\x96\x81"})
    pieces.emplace_back(p);
  return EncoderVocab::from_pieces(std::move(pieces), max_len);
}

inline EncoderConfig tiny_encoder(size_t vocab_size, size_t max_len = 16) {
  EncoderConfig cfg;
  cfg.vocab_size = vocab_size;
  cfg.hidden = 16;
  cfg.layers = 2;
  cfg.heads = 2;
  cfg.ffn = 32;
  cfg.max_len = max_len;
  return cfg;
}

// n-review corpus across `n_apps` synthetic apps with pseudo-random non-empty
// label sets; deterministic per seed.
inline Corpus toy_corpus(size_t n, size_t n_apps, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LabeledReview> entries;
  for (size_t i = 0; i < n; ++i) {
    LabeledReview e;
    e.review.id = "toy-" + std::to_string(i);
    e.review.app = "App" + std::to_string(i % n_apps);
    e.review.text = "avis numero " + std::to_string(i) + " tres bien";
    while (!e.labels.any())
      for (size_t l = 0; l < kNumLabels; ++l)
        e.labels.set(l, std::uniform_real_distribution<>(0, 1)(rng) < 0.4);
    entries.push_back(std::move(e));
  }
  return Corpus(std::move(entries));
}

inline std::string random_unicode_string(std::mt19937_64& rng, size_t max_chars = 40) {
  static const std::vector<std::string> chars = {
      "a", "b", "z", " ", "\xc3\xa9", "\xc3\xa8", "\xc3\xa0", "\xc3\xa7",
      "'", ",", ".", "!", "\xf0\x9f\x98\x80", "\xe2\x82\xac", "\"", "\n",
      "e", "t", "r", "s"};
  size_t n = std::uniform_int_distribution<size_t>(0, max_chars)(rng);
  std::string out;
  for (size_t i = 0; i < n; ++i)
    out += chars[std::uniform_int_distribution<size_t>(0, chars.size() - 1)(rng)];
  return out;
}

}  // namespace revmine::testing
