#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace revmine {

// Label order is fixed everywhere: (rating, bug_report, feature_request,
// user_experience). Reports, logits and metric vectors all follow it.
inline constexpr size_t kNumLabels = 4;
inline constexpr std::array<const char*, kNumLabels> kLabelNames = {
    "rating", "bug_report", "feature_request", "user_experience"};
inline constexpr std::array<const char*, kNumLabels> kLabelDisplayNames = {
    "Rating", "Bug Report", "Feature Request", "User Experience"};

struct LabelSet {
  bool rating = false;
  bool bug_report = false;
  bool feature_request = false;
  bool user_experience = false;

  bool operator[](size_t i) const {
    switch (i) {
      case 0: return rating;
      case 1: return bug_report;
      case 2: return feature_request;
      default: return user_experience;
    }
  }
  void set(size_t i, bool v) {
    switch (i) {
      case 0: rating = v; break;
      case 1: bug_report = v; break;
      case 2: feature_request = v; break;
      default: user_experience = v; break;
    }
  }
  bool any() const { return rating || bug_report || feature_request || user_experience; }
  bool operator==(const LabelSet&) const = default;
};

struct Review {
  std::string id;
  std::string app;
  std::string text;
  std::optional<int> store_score;       // 1..5 when present
  std::optional<std::string> posted_at; // ISO-8601 when present

  bool operator==(const Review&) const = default;
};

struct LabeledReview {
  Review review;
  LabelSet labels;

  bool operator==(const LabeledReview&) const = default;
};

// Immutable after construction. Entries keep file order; `apps` holds every
// distinct app name present.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<LabeledReview> entries);

  const std::vector<LabeledReview>& entries() const { return entries_; }
  const std::set<std::string>& apps() const { return apps_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Entries whose review.app == app; throws NotFoundError for unknown apps.
  std::vector<const LabeledReview*> by_app(const std::string& app) const;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<LabeledReview> entries_;
  std::set<std::string> apps_;
};

struct LabelCounts {
  std::array<int64_t, kNumLabels> counts{};
  int64_t total = 0;
};

// CSV with header: id,app,text,rating,bug_report,feature_request,user_experience.
// Labels are 0/1 cells. Rows violating the schema or corpus invariants throw
// with the 1-based data row number in the message.
Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Per-label positive counts, optionally restricted to one app. Counts may sum
// to more than total since reviews carry multiple labels.
LabelCounts label_counts(const Corpus& corpus,
                         const std::optional<std::string>& app = std::nullopt);

// Uniform sample without replacement; deterministic per seed, stable order.
std::vector<Review> sample_reviews(const std::vector<Review>& pool, size_t n,
                                   uint64_t seed);

// Raw (unlabeled) review files share the corpus format minus label columns.
std::vector<Review> load_raw_reviews(const std::filesystem::path& path);
void save_raw_reviews(const std::vector<Review>& reviews,
                      const std::filesystem::path& path);

}  // namespace revmine
