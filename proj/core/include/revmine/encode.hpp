#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace revmine {

// Subword vocabulary in sentencepiece style: "\xe2\x96\x81" (lower one eighth
// block) marks a word boundary, <0xNN> pieces give byte-level fallback so any
// unicode input is tokenizable. Loaded from a plain-text asset, one piece per
// line, id = line index. Read-only after load.
class EncoderVocab {
 public:
  static EncoderVocab load(const std::filesystem::path& path, size_t max_len = 512);
  // Builds a vocabulary from an explicit piece list (tests use tiny ones).
  static EncoderVocab from_pieces(std::vector<std::string> pieces, size_t max_len = 512);

  int32_t bos_id() const { return bos_id_; }
  int32_t eos_id() const { return eos_id_; }
  int32_t pad_id() const { return pad_id_; }
  int32_t unk_id() const { return unk_id_; }
  size_t max_len() const { return max_len_; }
  size_t size() const { return pieces_.size(); }
  const std::string& piece(int32_t id) const { return pieces_.at(static_cast<size_t>(id)); }

  // Greedy longest-match segmentation; unmatched characters fall back to
  // their UTF-8 bytes (or <unk> when the vocab has no byte pieces).
  std::vector<int32_t> tokenize(const std::string& text) const;
  std::string detokenize(const std::vector<int32_t>& ids) const;

 private:
  EncoderVocab() = default;
  void index_pieces();

  std::vector<std::string> pieces_;
  std::unordered_map<std::string, int32_t> piece_to_id_;
  std::array<int32_t, 256> byte_ids_{};
  size_t max_piece_bytes_ = 0;
  int32_t bos_id_ = -1, eos_id_ = -1, pad_id_ = -1, unk_id_ = -1;
  size_t max_len_ = 512;
};

// The model's input contract: BOS + subwords (truncated to max_len-2) + EOS,
// right-padded to max_len, mask = prefix of ones of length active_len.
struct EncodedReview {
  std::vector<int32_t> token_ids;
  std::vector<uint8_t> attention_mask;
  size_t active_len = 0;
};

EncodedReview encode_review(const std::string& text, const EncoderVocab& vocab);
std::vector<EncodedReview> encode_batch(const std::vector<std::string>& texts,
                                        const EncoderVocab& vocab);

}  // namespace revmine
