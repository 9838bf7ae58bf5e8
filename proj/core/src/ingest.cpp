#include "revmine/ingest.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "revmine/errors.hpp"

namespace revmine {

FetchSpec::FetchSpec(std::string app_id, size_t max_reviews, std::string language,
                     size_t page_size, double rate_limit)
    : app_id_(std::move(app_id)), language_(std::move(language)),
      max_reviews_(max_reviews), page_size_(page_size), rate_limit_(rate_limit) {
  if (app_id_.empty()) throw ArgumentError("app_id must be non-empty");
  if (max_reviews_ < 1) throw ArgumentError("max_reviews must be >= 1");
  if (page_size_ < 1) throw ArgumentError("page_size must be >= 1");
  if (!(rate_limit_ > 0)) throw ArgumentError("rate_limit must be > 0");
}

namespace {

class HttpsTransport : public Transport {
 public:
  explicit HttpsTransport(std::string host) : host_(std::move(host)) {}

  HttpResponse get(const std::string& path) override {
    httplib::Client client(host_);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    auto res = client.Get(path);
    if (!res) throw TransportError("request to " + host_ + path + " failed: " +
                                   httplib::to_string(res.error()));
    return {res->status, res->body};
  }

 private:
  std::string host_;
};

class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(const std::filesystem::path& fixture) {
    std::ifstream in(fixture, std::ios::binary);
    if (!in) throw IoError("cannot open fixture file: " + fixture.string());
    in >> responses_;
  }

  HttpResponse get(const std::string& path) override {
    auto it = responses_.find(path);
    if (it == responses_.end()) return {404, ""};
    return {it->value("status", 200), it->value("body", "")};
  }

 private:
  nlohmann::json responses_;
};

class SystemClock : public Clock {
 public:
  std::chrono::steady_clock::time_point now() override {
    return std::chrono::steady_clock::now();
  }
  void sleep_for(std::chrono::milliseconds d) override {
    std::this_thread::sleep_for(d);
  }
};

std::string url_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xf]);
    }
  }
  return out;
}

}  // namespace

std::unique_ptr<Transport> make_https_transport(const std::string& host) {
  return std::make_unique<HttpsTransport>(host);
}

std::unique_ptr<Transport> make_fixture_transport(const std::filesystem::path& fixture) {
  return std::make_unique<FixtureTransport>(fixture);
}

std::unique_ptr<Clock> make_system_clock() { return std::make_unique<SystemClock>(); }

RateLimiter::RateLimiter(double per_second, Clock& clock)
    : per_second_(per_second), clock_(clock) {
  if (!(per_second > 0)) throw ArgumentError("rate limit must be > 0");
}

void RateLimiter::acquire() {
  using namespace std::chrono;
  const auto window = seconds(1);
  auto limit = static_cast<size_t>(per_second_);
  if (limit == 0) limit = 1;
  for (;;) {
    auto now = clock_.now();
    while (!issued_.empty() && now - issued_.front() >= window) issued_.pop_front();
    if (issued_.size() < limit) {
      issued_.push_back(now);
      return;
    }
    auto wait = duration_cast<milliseconds>(issued_.front() + window - now);
    clock_.sleep_for(std::max(wait, milliseconds(1)));
  }
}

PlayStoreClient::PlayStoreClient(std::unique_ptr<Transport> transport,
                                 std::unique_ptr<Clock> clock)
    : transport_(std::move(transport)), clock_(std::move(clock)) {}

HttpResponse PlayStoreClient::get_with_retry(const std::string& path) {
  constexpr int kMaxAttempts = 5;
  std::chrono::milliseconds backoff(250);
  for (int attempt = 1;; ++attempt) {
    bool transient = false;
    std::string detail;
    try {
      HttpResponse res = transport_->get(path);
      if (res.status == 200) return res;
      if (res.status == 404) throw NotFoundError("app not found: " + path);
      if (res.status == 429 || res.status >= 500) {
        transient = true;
        detail = "HTTP " + std::to_string(res.status);
      } else {
        throw TransportError("unexpected HTTP " + std::to_string(res.status) +
                             " for " + path);
      }
    } catch (const TransportError& e) {
      transient = true;
      detail = e.what();
    }
    if (transient) {
      if (attempt >= kMaxAttempts)
        throw TransportError("giving up on " + path + " after " +
                             std::to_string(kMaxAttempts) + " attempts: " + detail);
      clock_->sleep_for(backoff);
      backoff *= 2;
    }
  }
}

std::vector<Review> PlayStoreClient::fetch_reviews(const FetchSpec& spec) {
  RateLimiter limiter(spec.rate_limit(), *clock_);
  std::vector<Review> out;
  std::set<std::string> seen_ids;
  std::string token;

  while (out.size() < spec.max_reviews()) {
    std::string path = "/reviews?app=" + url_encode(spec.app_id()) +
                       "&hl=" + url_encode(spec.language()) +
                       "&num=" + std::to_string(spec.page_size());
    if (!token.empty()) path += "&token=" + url_encode(token);

    limiter.acquire();
    HttpResponse res = get_with_retry(path);

    nlohmann::json page;
    try {
      page = nlohmann::json::parse(res.body);
    } catch (const nlohmann::json::exception& e) {
      throw TransportError("malformed review page from " + path + ": " + e.what());
    }

    for (const auto& r : page.value("reviews", nlohmann::json::array())) {
      std::string id = r.value("id", "");
      std::string text = r.value("text", "");
      if (id.empty() || text.empty()) continue;
      if (!seen_ids.insert(id).second) continue;  // server pages can overlap
      Review rev;
      rev.id = id;
      rev.app = spec.app_id();
      rev.text = text;
      if (r.contains("score") && r["score"].is_number_integer())
        rev.store_score = r["score"].get<int>();
      if (r.contains("date") && r["date"].is_string())
        rev.posted_at = r["date"].get<std::string>();
      out.push_back(std::move(rev));
      if (out.size() == spec.max_reviews()) break;
    }

    auto next = page.find("next_token");
    if (next == page.end() || next->is_null() || !next->is_string() ||
        next->get<std::string>().empty())
      break;
    token = next->get<std::string>();
  }
  return out;
}

void export_raw(const std::vector<Review>& reviews, const std::filesystem::path& path) {
  save_raw_reviews(reviews, path);
}

}  // namespace revmine
