#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "revmine/corpus.hpp"

namespace revmine {

// Validated at construction; invalid arguments throw ArgumentError.
class FetchSpec {
 public:
  FetchSpec(std::string app_id, size_t max_reviews, std::string language = "fr",
            size_t page_size = 40, double rate_limit = 1.0);

  const std::string& app_id() const { return app_id_; }
  const std::string& language() const { return language_; }
  size_t max_reviews() const { return max_reviews_; }
  size_t page_size() const { return page_size_; }
  double rate_limit() const { return rate_limit_; }

 private:
  std::string app_id_;
  std::string language_;
  size_t max_reviews_;
  size_t page_size_;
  double rate_limit_;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Network seam: the real client speaks HTTPS, tests replay recorded fixtures.
struct Transport {
  virtual ~Transport() = default;
  // path is relative to the transport's host, e.g. "/reviews?app=...".
  virtual HttpResponse get(const std::string& path) = 0;
};

std::unique_ptr<Transport> make_https_transport(const std::string& host);

// Replays responses from a JSON fixture file: {"<path>": {"status": N, "body": "..."}}.
// Unknown paths answer 404.
std::unique_ptr<Transport> make_fixture_transport(const std::filesystem::path& fixture);

// Time seam so rate limiting and backoff are testable with a mock clock.
struct Clock {
  virtual ~Clock() = default;
  virtual std::chrono::steady_clock::time_point now() = 0;
  virtual void sleep_for(std::chrono::milliseconds d) = 0;
};

std::unique_ptr<Clock> make_system_clock();

// Sliding-window limiter: at most `per_second` acquisitions in any 1 s window.
class RateLimiter {
 public:
  RateLimiter(double per_second, Clock& clock);
  void acquire();

 private:
  double per_second_;
  Clock& clock_;
  std::deque<std::chrono::steady_clock::time_point> issued_;
};

// Paginated review fetcher. The endpoint serves JSON pages:
//   GET /reviews?app=<id>&hl=<lang>&num=<page_size>[&token=<t>]
//   -> {"reviews": [{"id", "text", "score", "date"}, ...], "next_token": <t>|null}
// Reviews arrive newest-first; max_reviews truncates. Transient failures
// (5xx, 429, transport) retry with exponential backoff up to 5 attempts.
class PlayStoreClient {
 public:
  PlayStoreClient(std::unique_ptr<Transport> transport, std::unique_ptr<Clock> clock);

  std::vector<Review> fetch_reviews(const FetchSpec& spec);

 private:
  HttpResponse get_with_retry(const std::string& path);

  std::unique_ptr<Transport> transport_;
  std::unique_ptr<Clock> clock_;
};

// Raw export shares the corpus file format minus label columns; the matching
// loader is load_raw_reviews in corpus.hpp.
void export_raw(const std::vector<Review>& reviews, const std::filesystem::path& path);

}  // namespace revmine
