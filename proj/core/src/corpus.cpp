#include "revmine/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "revmine/csv.hpp"
#include "revmine/errors.hpp"

namespace revmine {
namespace {

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else if (!out.empty() && out.back() != '-')
      out.push_back('-');
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_label_cell(const std::string& cell, size_t row, const char* col) {
  if (cell == "0") return false;
  if (cell == "1") return true;
  throw SchemaError("row " + std::to_string(row) + ": non-binary value '" + cell +
                    "' in label column " + col);
}

struct ColumnMap {
  int id = -1, app = -1, text = -1, score = -1, posted = -1;
  std::array<int, kNumLabels> labels{-1, -1, -1, -1};
  size_t width = 0;
};

ColumnMap map_header(const std::vector<std::string>& header) {
  ColumnMap m;
  m.width = header.size();
  for (size_t i = 0; i < header.size(); ++i) {
    const std::string name = trimmed(header[i]);
    if (name == "id") m.id = static_cast<int>(i);
    else if (name == "app") m.app = static_cast<int>(i);
    else if (name == "text") m.text = static_cast<int>(i);
    else if (name == "store_score") m.score = static_cast<int>(i);
    else if (name == "posted_at") m.posted = static_cast<int>(i);
    else {
      for (size_t l = 0; l < kNumLabels; ++l)
        if (name == kLabelNames[l]) m.labels[l] = static_cast<int>(i);
    }
  }
  if (m.app < 0 || m.text < 0)
    throw SchemaError("header must contain 'app' and 'text' columns");
  for (size_t l = 0; l < kNumLabels; ++l)
    if (m.labels[l] < 0)
      throw SchemaError(std::string("header missing label column '") + kLabelNames[l] + "'");
  return m;
}

}  // namespace

Corpus::Corpus(std::vector<LabeledReview> entries) : entries_(std::move(entries)) {
  std::unordered_set<std::string> ids;
  for (const auto& e : entries_) {
    if (trimmed(e.review.text).empty())
      throw IntegrityError("review '" + e.review.id + "' has empty text");
    if (!e.labels.any())
      throw IntegrityError("review '" + e.review.id + "' has no labels set");
    if (!ids.insert(e.review.id).second)
      throw IntegrityError("duplicate review id '" + e.review.id + "'");
    apps_.insert(e.review.app);
  }
}

std::vector<const LabeledReview*> Corpus::by_app(const std::string& app) const {
  if (!apps_.contains(app)) throw NotFoundError("unknown app '" + app + "'");
  std::vector<const LabeledReview*> out;
  for (const auto& e : entries_)
    if (e.review.app == app) out.push_back(&e);
  return out;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path.string());

  auto header = csv::read_row(in);
  if (!header) return Corpus{};
  ColumnMap cols = map_header(*header);

  std::vector<LabeledReview> entries;
  size_t row = 0;
  while (auto fields = csv::read_row(in)) {
    ++row;
    if (fields->size() == 1 && (*fields)[0].empty()) continue;  // trailing blank line
    if (fields->size() != cols.width)
      throw SchemaError("row " + std::to_string(row) + ": expected " +
                        std::to_string(cols.width) + " columns, got " +
                        std::to_string(fields->size()));
    LabeledReview e;
    e.review.app = (*fields)[cols.app];
    e.review.text = (*fields)[cols.text];
    e.review.id = cols.id >= 0 ? (*fields)[cols.id]
                               : slug(e.review.app) + "-" + std::to_string(row - 1);
    if (cols.score >= 0 && !(*fields)[cols.score].empty()) {
      try {
        e.review.store_score = std::stoi((*fields)[cols.score]);
      } catch (const std::exception&) {
        throw SchemaError("row " + std::to_string(row) + ": bad store_score '" +
                          (*fields)[cols.score] + "'");
      }
    }
    if (cols.posted >= 0 && !(*fields)[cols.posted].empty())
      e.review.posted_at = (*fields)[cols.posted];
    for (size_t l = 0; l < kNumLabels; ++l)
      e.labels.set(l, parse_label_cell((*fields)[cols.labels[l]], row, kLabelNames[l]));
    if (!e.labels.any())
      throw IntegrityError("row " + std::to_string(row) + ": all label columns are 0");
    entries.push_back(std::move(e));
  }
  return Corpus(std::move(entries));
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file: " + path.string());
  csv::write_row(out, {"id", "app", "text", "store_score", "posted_at", "rating",
                       "bug_report", "feature_request", "user_experience"});
  for (const auto& e : corpus.entries()) {
    std::vector<std::string> fields = {
        e.review.id, e.review.app, e.review.text,
        e.review.store_score ? std::to_string(*e.review.store_score) : "",
        e.review.posted_at.value_or("")};
    for (size_t l = 0; l < kNumLabels; ++l)
      fields.push_back(e.labels[l] ? "1" : "0");
    csv::write_row(out, fields);
  }
  if (!out) throw IoError("write failed: " + path.string());
}

LabelCounts label_counts(const Corpus& corpus, const std::optional<std::string>& app) {
  if (app && !corpus.apps().contains(*app))
    throw NotFoundError("unknown app '" + *app + "'");
  LabelCounts lc;
  for (const auto& e : corpus.entries()) {
    if (app && e.review.app != *app) continue;
    ++lc.total;
    for (size_t l = 0; l < kNumLabels; ++l)
      if (e.labels[l]) ++lc.counts[l];
  }
  return lc;
}

std::vector<Review> sample_reviews(const std::vector<Review>& pool, size_t n,
                                   uint64_t seed) {
  if (n > pool.size())
    throw ArgumentError("sample size " + std::to_string(n) + " exceeds pool size " +
                        std::to_string(pool.size()));
  std::vector<size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: first n positions are the sample.
  for (size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<size_t> d(i, idx.size() - 1);
    std::swap(idx[i], idx[d(rng)]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());  // stable output order = pool order
  std::vector<Review> out;
  out.reserve(n);
  for (size_t i : idx) out.push_back(pool[i]);
  return out;
}

std::vector<Review> load_raw_reviews(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open review file: " + path.string());
  auto header = csv::read_row(in);
  if (!header) return {};
  std::vector<Review> out;
  size_t row = 0;
  while (auto fields = csv::read_row(in)) {
    ++row;
    if (fields->size() == 1 && (*fields)[0].empty()) continue;
    if (fields->size() != 5)
      throw SchemaError("row " + std::to_string(row) + ": expected 5 columns, got " +
                        std::to_string(fields->size()));
    Review r;
    r.id = (*fields)[0];
    r.app = (*fields)[1];
    r.text = (*fields)[2];
    if (!(*fields)[3].empty()) r.store_score = std::stoi((*fields)[3]);
    if (!(*fields)[4].empty()) r.posted_at = (*fields)[4];
    out.push_back(std::move(r));
  }
  return out;
}

void save_raw_reviews(const std::vector<Review>& reviews,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write review file: " + path.string());
  csv::write_row(out, {"id", "app", "text", "store_score", "posted_at"});
  for (const auto& r : reviews) {
    csv::write_row(out, {r.id, r.app, r.text,
                         r.store_score ? std::to_string(*r.store_score) : "",
                         r.posted_at.value_or("")});
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace revmine
