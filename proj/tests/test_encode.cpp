#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "revmine/encode.hpp"

using namespace revmine;
namespace tst = revmine::testing;

namespace {

void check_invariants(const EncodedReview& enc, const EncoderVocab& vocab) {
  REQUIRE(enc.token_ids.size() == vocab.max_len());
  REQUIRE(enc.attention_mask.size() == vocab.max_len());
  REQUIRE(enc.active_len >= 2);
  CHECK(enc.token_ids[0] == vocab.bos_id());
  CHECK(enc.token_ids[enc.active_len - 1] == vocab.eos_id());
  size_t mask_sum = 0;
  for (size_t i = 0; i < enc.attention_mask.size(); ++i) {
    mask_sum += enc.attention_mask[i];
    CHECK(enc.attention_mask[i] == (i < enc.active_len ? 1 : 0));
    if (i >= enc.active_len) CHECK(enc.token_ids[i] == vocab.pad_id());
  }
  CHECK(mask_sum == enc.active_len);
}

}  // namespace

TEST_CASE("tokenize: empty string yields empty sequence") {
  auto vocab = tst::tiny_vocab();
  CHECK(vocab.tokenize("").empty());
}

TEST_CASE("tokenize round-trips 'Très bien'") {
  auto vocab = tst::tiny_vocab();
  auto ids = vocab.tokenize("Très bien");
  CHECK_FALSE(ids.empty());
  CHECK(vocab.detokenize(ids) == "Très bien");
}

TEST_CASE("tokenize round-trips random unicode (byte fallback)") {
  auto vocab = tst::tiny_vocab(64);
  std::mt19937_64 rng(42);
  for (int i = 0; i < 500; ++i) {
    std::string s = tst::random_unicode_string(rng);
    CHECK(vocab.detokenize(vocab.tokenize(s)) == s);
  }
}

TEST_CASE("tokenize is deterministic") {
  auto vocab = tst::tiny_vocab();
  CHECK(vocab.tokenize("très bien appli") == vocab.tokenize("très bien appli"));
}

TEST_CASE("encode_review: empty text gives BOS+EOS only") {
  auto vocab = tst::tiny_vocab();
  auto enc = encode_review("", vocab);
  CHECK(enc.active_len == 2);
  check_invariants(enc, vocab);
}

TEST_CASE("encode_review: body length equals tokenize length plus 2") {
  auto vocab = tst::tiny_vocab(32);
  std::string text = "Très bien";
  auto enc = encode_review(text, vocab);
  CHECK(enc.active_len == 2 + vocab.tokenize(text).size());
  check_invariants(enc, vocab);
}

TEST_CASE("encode_review: over-long text truncates, keeping BOS and EOS") {
  auto vocab = tst::tiny_vocab(16);
  std::string text(10000, 'x');
  auto enc = encode_review(text, vocab);
  CHECK(enc.active_len == 16);
  CHECK(enc.token_ids[15] == vocab.eos_id());
  check_invariants(enc, vocab);
}

TEST_CASE("encode_review is deterministic") {
  auto vocab = tst::tiny_vocab();
  auto a = encode_review("même texte", vocab);
  auto b = encode_review("même texte", vocab);
  CHECK(a.token_ids == b.token_ids);
  CHECK(a.attention_mask == b.attention_mask);
  CHECK(a.active_len == b.active_len);
}

TEST_CASE("encode_batch composes elementwise in order") {
  auto vocab = tst::tiny_vocab();
  CHECK(encode_batch({}, vocab).empty());
  auto batch = encode_batch({"a", "b"}, vocab);
  REQUIRE(batch.size() == 2);
  CHECK(batch[0].token_ids == encode_review("a", vocab).token_ids);
  CHECK(batch[1].token_ids == encode_review("b", vocab).token_ids);
}

TEST_CASE("encode invariants hold on random inputs") {
  auto vocab = tst::tiny_vocab(24);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i)
    check_invariants(encode_review(tst::random_unicode_string(rng, 120), vocab), vocab);
}

TEST_CASE("bundled vocabulary loads and round-trips dataset-style text") {
  auto vocab = EncoderVocab::load(tst::vocab_path(), 512);
  CHECK(vocab.max_len() == 512);
  std::string text = "Très bien. l'application plante au démarrage";
  CHECK(vocab.detokenize(vocab.tokenize(text)) == text);
  check_invariants(encode_review(text, vocab), vocab);
}
