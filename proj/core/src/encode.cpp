#include "revmine/encode.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "revmine/errors.hpp"

namespace revmine {
namespace {

constexpr const char* kWordBoundary = "\xe2\x96\x81";  // "▁"

size_t utf8_char_len(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;  // invalid byte, consume singly
}

// Space -> word boundary marker, with a leading marker on non-empty text.
std::string normalize(const std::string& text) {
  if (text.empty()) return "";
  std::string out = kWordBoundary;
  for (char c : text) {
    if (c == ' ')
      out += kWordBoundary;
    else
      out.push_back(c);
  }
  return out;
}

}  // namespace

EncoderVocab EncoderVocab::load(const std::filesystem::path& path, size_t max_len) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocabulary file: " + path.string());
  std::vector<std::string> pieces;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pieces.push_back(line);
  }
  return from_pieces(std::move(pieces), max_len);
}

EncoderVocab EncoderVocab::from_pieces(std::vector<std::string> pieces, size_t max_len) {
  EncoderVocab v;
  v.pieces_ = std::move(pieces);
  v.max_len_ = max_len;
  v.index_pieces();
  return v;
}

void EncoderVocab::index_pieces() {
  byte_ids_.fill(-1);
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const std::string& p = pieces_[i];
    auto id = static_cast<int32_t>(i);
    if (p == "<s>") { bos_id_ = id; continue; }
    if (p == "</s>") { eos_id_ = id; continue; }
    if (p == "<pad>") { pad_id_ = id; continue; }
    if (p == "<unk>") { unk_id_ = id; continue; }
    if (p.size() == 6 && p.starts_with("<0x") && p.back() == '>') {
      unsigned byte = 0;
      if (std::sscanf(p.c_str(), "<0x%02X>", &byte) == 1 && byte < 256) {
        byte_ids_[byte] = id;
        continue;
      }
    }
    piece_to_id_.emplace(p, id);
    max_piece_bytes_ = std::max(max_piece_bytes_, p.size());
  }
  if (bos_id_ < 0 || eos_id_ < 0 || pad_id_ < 0)
    throw SchemaError("vocabulary must define <s>, </s> and <pad> pieces");
  if (bos_id_ == eos_id_ || bos_id_ == pad_id_ || eos_id_ == pad_id_)
    throw SchemaError("special pieces must have distinct ids");
}

std::vector<int32_t> EncoderVocab::tokenize(const std::string& text) const {
  const std::string s = normalize(text);
  std::vector<int32_t> out;
  size_t i = 0;
  while (i < s.size()) {
    size_t best = 0;
    int32_t best_id = -1;
    size_t limit = std::min(max_piece_bytes_, s.size() - i);
    for (size_t len = limit; len >= 1; --len) {
      auto it = piece_to_id_.find(s.substr(i, len));
      if (it != piece_to_id_.end()) {
        best = len;
        best_id = it->second;
        break;
      }
    }
    if (best_id >= 0) {
      out.push_back(best_id);
      i += best;
      continue;
    }
    // Byte fallback for the next codepoint.
    size_t clen = std::min(utf8_char_len(static_cast<unsigned char>(s[i])), s.size() - i);
    bool have_bytes = true;
    for (size_t k = 0; k < clen; ++k)
      if (byte_ids_[static_cast<unsigned char>(s[i + k])] < 0) have_bytes = false;
    if (have_bytes) {
      for (size_t k = 0; k < clen; ++k)
        out.push_back(byte_ids_[static_cast<unsigned char>(s[i + k])]);
    } else {
      if (unk_id_ < 0)
        throw SchemaError("vocabulary has neither byte fallback nor <unk>");
      out.push_back(unk_id_);
    }
    i += clen;
  }
  return out;
}

std::string EncoderVocab::detokenize(const std::vector<int32_t>& ids) const {
  std::string joined;
  for (int32_t id : ids) {
    if (id == bos_id_ || id == eos_id_ || id == pad_id_ || id == unk_id_) continue;
    const std::string& p = piece(id);
    if (p.size() == 6 && p.starts_with("<0x") && p.back() == '>') {
      unsigned byte = 0;
      std::sscanf(p.c_str(), "<0x%02X>", &byte);
      joined.push_back(static_cast<char>(byte));
    } else {
      joined += p;
    }
  }
  std::string out;
  size_t i = 0;
  const std::string wb = kWordBoundary;
  while (i < joined.size()) {
    if (joined.compare(i, wb.size(), wb) == 0) {
      out.push_back(' ');
      i += wb.size();
    } else {
      out.push_back(joined[i]);
      ++i;
    }
  }
  if (!out.empty() && out.front() == ' ') out.erase(out.begin());
  return out;
}

EncodedReview encode_review(const std::string& text, const EncoderVocab& vocab) {
  std::vector<int32_t> pieces = vocab.tokenize(text);
  const size_t body_max = vocab.max_len() - 2;
  if (pieces.size() > body_max) pieces.resize(body_max);

  EncodedReview enc;
  enc.token_ids.reserve(vocab.max_len());
  enc.token_ids.push_back(vocab.bos_id());
  enc.token_ids.insert(enc.token_ids.end(), pieces.begin(), pieces.end());
  enc.token_ids.push_back(vocab.eos_id());
  enc.active_len = enc.token_ids.size();
  enc.token_ids.resize(vocab.max_len(), vocab.pad_id());
  enc.attention_mask.assign(vocab.max_len(), 0);
  std::fill_n(enc.attention_mask.begin(), enc.active_len, uint8_t{1});
  return enc;
}

std::vector<EncodedReview> encode_batch(const std::vector<std::string>& texts,
                                        const EncoderVocab& vocab) {
  std::vector<EncodedReview> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(encode_review(t, vocab));
  return out;
}

}  // namespace revmine
