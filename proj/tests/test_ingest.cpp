#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "helpers.hpp"
#include "revmine/errors.hpp"
#include "revmine/ingest.hpp"

using namespace revmine;
using nlohmann::json;

namespace {

// Virtual clock: sleeping advances time instantly.
class MockClock : public Clock {
 public:
  std::chrono::steady_clock::time_point now() override { return now_; }
  void sleep_for(std::chrono::milliseconds d) override { now_ += d; }
  std::chrono::steady_clock::time_point now_ = std::chrono::steady_clock::time_point{};
};

// Scripted transport recording request times against an external clock.
class ScriptedTransport : public Transport {
 public:
  struct Call {
    std::string path;
    std::chrono::steady_clock::time_point at;
  };
  explicit ScriptedTransport(MockClock& clock) : clock_(clock) {}

  HttpResponse get(const std::string& path) override {
    calls.push_back({path, clock_.now()});
    if (!script.empty()) {
      auto next = script.front();
      script.erase(script.begin());
      return next;
    }
    return {404, ""};
  }

  std::vector<Call> calls;
  std::vector<HttpResponse> script;

 private:
  MockClock& clock_;
};

std::string page_body(std::vector<std::pair<std::string, std::string>> reviews,
                      const std::string& next_token) {
  json j;
  j["reviews"] = json::array();
  for (auto& [id, text] : reviews)
    j["reviews"].push_back({{"id", id}, {"text", text}, {"score", 4}});
  if (next_token.empty())
    j["next_token"] = nullptr;
  else
    j["next_token"] = next_token;
  return j.dump();
}

std::filesystem::path write_fixture(const json& j, const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream out(p, std::ios::binary);
  out << j.dump();
  return p;
}

}  // namespace

TEST_CASE("FetchSpec validates at construction") {
  CHECK_THROWS_AS(FetchSpec("com.app", 0), ArgumentError);
  CHECK_THROWS_AS(FetchSpec("com.app", 10, "fr", 0), ArgumentError);
  CHECK_THROWS_AS(FetchSpec("com.app", 10, "fr", 40, 0.0), ArgumentError);
  CHECK_THROWS_AS(FetchSpec("", 10), ArgumentError);
  FetchSpec ok("com.app", 10);
  CHECK(ok.language() == "fr");
}

TEST_CASE("pagination deduplicates by store review id") {
  auto clock = std::make_unique<MockClock>();
  auto* clock_ptr = clock.get();
  auto transport = std::make_unique<ScriptedTransport>(*clock_ptr);
  transport->script = {
      {200, page_body({{"a", "un"}, {"b", "deux"}, {"c", "trois"}}, "t2")},
      {200, page_body({{"c", "trois"}, {"d", "quatre"}, {"e", "cinq"}}, "")},
  };
  auto* transport_ptr = transport.get();
  PlayStoreClient client(std::move(transport), std::move(clock));
  auto reviews = client.fetch_reviews(FetchSpec("com.app", 100, "fr", 3, 100.0));
  CHECK(reviews.size() == 5);
  std::set<std::string> ids;
  for (const auto& r : reviews) {
    CHECK_FALSE(r.text.empty());
    CHECK(ids.insert(r.id).second);
  }
  REQUIRE(transport_ptr->calls.size() == 2);
  CHECK(transport_ptr->calls[1].path.find("token=t2") != std::string::npos);
  CHECK(transport_ptr->calls[0].path.find("hl=fr") != std::string::npos);
}

TEST_CASE("max_reviews truncates mid-page") {
  auto clock = std::make_unique<MockClock>();
  auto transport = std::make_unique<ScriptedTransport>(*clock);
  transport->script = {
      {200, page_body({{"a", "un"}, {"b", "deux"}, {"c", "trois"}}, "t2")},
  };
  PlayStoreClient client(std::move(transport), std::move(clock));
  auto reviews = client.fetch_reviews(FetchSpec("com.app", 2, "fr", 3, 100.0));
  CHECK(reviews.size() == 2);
  CHECK(reviews[0].id == "a");
  CHECK(reviews[1].id == "b");
}

TEST_CASE("rate limit holds in every sliding 1-second window") {
  auto clock = std::make_unique<MockClock>();
  auto* clock_ptr = clock.get();
  auto transport = std::make_unique<ScriptedTransport>(*clock_ptr);
  for (int i = 0; i < 9; ++i)
    transport->script.push_back(
        {200, page_body({{"id" + std::to_string(i), "texte"}},
                        i < 8 ? "t" + std::to_string(i) : "")});
  auto* transport_ptr = transport.get();
  PlayStoreClient client(std::move(transport), std::move(clock));
  auto reviews = client.fetch_reviews(FetchSpec("com.app", 9, "fr", 1, 3.0));
  CHECK(reviews.size() == 9);

  const auto& calls = transport_ptr->calls;
  REQUIRE(calls.size() == 9);
  for (size_t i = 0; i < calls.size(); ++i) {
    size_t in_window = 0;
    for (size_t j = 0; j < calls.size(); ++j)
      if (calls[j].at >= calls[i].at &&
          calls[j].at - calls[i].at < std::chrono::seconds(1))
        ++in_window;
    CHECK(in_window <= 3);
  }
}

TEST_CASE("transient failures retry with backoff, then succeed") {
  auto clock = std::make_unique<MockClock>();
  auto* clock_ptr = clock.get();
  auto transport = std::make_unique<ScriptedTransport>(*clock_ptr);
  transport->script = {
      {500, ""},
      {429, ""},
      {200, page_body({{"a", "enfin"}}, "")},
  };
  auto* transport_ptr = transport.get();
  PlayStoreClient client(std::move(transport), std::move(clock));
  auto reviews = client.fetch_reviews(FetchSpec("com.app", 5, "fr", 1, 100.0));
  CHECK(reviews.size() == 1);
  CHECK(transport_ptr->calls.size() == 3);
  // exponential backoff: second gap at least double the first
  auto gap1 = transport_ptr->calls[1].at - transport_ptr->calls[0].at;
  auto gap2 = transport_ptr->calls[2].at - transport_ptr->calls[1].at;
  CHECK(gap2 >= 2 * gap1);
}

TEST_CASE("persistent server failure exhausts retries") {
  auto clock = std::make_unique<MockClock>();
  auto transport = std::make_unique<ScriptedTransport>(*clock);
  for (int i = 0; i < 10; ++i) transport->script.push_back({503, ""});
  PlayStoreClient client(std::move(transport), std::move(clock));
  CHECK_THROWS_AS(client.fetch_reviews(FetchSpec("com.app", 5)), TransportError);
}

TEST_CASE("unknown app id maps to not-found") {
  auto clock = std::make_unique<MockClock>();
  auto transport = std::make_unique<ScriptedTransport>(*clock);  // always 404
  PlayStoreClient client(std::move(transport), std::move(clock));
  CHECK_THROWS_AS(client.fetch_reviews(FetchSpec("com.unknown", 5)), NotFoundError);
}

TEST_CASE("fixture transport replays recorded responses") {
  json fixture;
  fixture["/reviews?app=com.app&hl=fr&num=2"] = {
      {"status", 200}, {"body", page_body({{"x", "un"}, {"y", "deux"}}, "")}};
  auto path = write_fixture(fixture, "revmine_fixture.json");
  auto transport = make_fixture_transport(path);
  PlayStoreClient client(std::move(transport), std::make_unique<MockClock>());
  auto reviews = client.fetch_reviews(FetchSpec("com.app", 10, "fr", 2, 100.0));
  CHECK(reviews.size() == 2);
}
