#include "doctest.h"

#include <atomic>
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "cuest/errors.hpp"
#include "cuest/semantics.hpp"
#include "cuest/text.hpp"

using namespace cuest;

TEST_CASE("builtin embedder: identical texts give identical vectors, cosine exactly 1") {
  HashedTfEmbedder embedder;
  auto vs = embedder.embed({"Curiosity drives learning", "Curiosity drives learning"});
  REQUIRE(vs.size() == 2);
  CHECK(vs[0].values == vs[1].values);
  CHECK(vs[0].values.size() == kBuiltinEmbeddingDim);
  CHECK(cosine(vs[0], vs[1]) == 1.0);
}

TEST_CASE("builtin embedder: disjoint token sets without bucket collisions are orthogonal") {
  // First confirm with the pinned hash that no bucket collides across texts.
  std::vector<std::string> a{"alpha", "beta", "gamma"};
  std::vector<std::string> b{"delta", "epsilon", "zeta"};
  std::set<std::size_t> buckets_a, buckets_b;
  for (const auto& t : a) buckets_a.insert(HashedTfEmbedder::bucket_of(t));
  for (const auto& t : b) buckets_b.insert(HashedTfEmbedder::bucket_of(t));
  for (auto bucket : buckets_a) REQUIRE(buckets_b.count(bucket) == 0);

  HashedTfEmbedder embedder;
  auto vs = embedder.embed({"alpha beta gamma", "delta epsilon zeta"});
  CHECK(cosine(vs[0], vs[1]) == 0.0);
}

TEST_CASE("builtin embedder entries are nonnegative term counts") {
  HashedTfEmbedder embedder;
  auto v = embedder.embed({"the the the cat"});
  double sum = 0.0;
  for (double x : v[0].values) {
    CHECK(x >= 0.0);
    sum += x;
  }
  CHECK(sum == 4.0);
}

TEST_CASE("embedding empty text is an error") {
  HashedTfEmbedder embedder;
  try {
    embedder.embed({"  "});
    FAIL("expected empty_text");
  } catch (const error& e) {
    CHECK(e.code() == errc::empty_text);
  }
}

TEST_CASE("builtin cosine stays in [0,1] on random token soups") {
  HashedTfEmbedder embedder;
  SplitMix64 rng(11);
  for (int round = 0; round < 50; ++round) {
    std::string x, y;
    for (int i = 0; i < 12; ++i) {
      x += "w" + std::to_string(rng.next_index(40)) + " ";
      y += "w" + std::to_string(rng.next_index(40)) + " ";
    }
    auto vs = embedder.embed({x, y});
    double c = cosine(vs[0], vs[1]);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0 + 1e-12);
    CHECK(c == cosine(vs[1], vs[0]));
  }
}

TEST_CASE("heuristic judge: factoid patterns mean entailment, otherwise neutral") {
  FactoidPatternJudge judge;
  CHECK(judge.judge("What is the capital of Cambodia?").label == NliLabel::Entailment);
  CHECK(judge.judge("How many moons does Jupiter have?").label == NliLabel::Entailment);
  CHECK(judge.judge("When was Mozart born?").label == NliLabel::Entailment);
  CHECK(judge.judge("Why do people fear change?").label == NliLabel::Neutral);
  CHECK(judge.judge("What makes a society curious?").label == NliLabel::Neutral);
  // judge is pure
  CHECK(judge.judge("Why do people fear change?").label == judge.judge("Why do people fear change?").label);
}

TEST_CASE("judging empty text is an error") {
  FactoidPatternJudge judge;
  try {
    judge.judge("");
    FAIL("expected empty_text");
  } catch (const error& e) {
    CHECK(e.code() == errc::empty_text);
  }
}

TEST_CASE("remote backends fail with remote_unavailable when the service is down") {
  RemoteConfig config;
  config.base_url = "http://127.0.0.1:9";  // discard port, nothing listens
  config.timeout_seconds = 1;
  config.max_retries = 0;
  RemoteEmbedder embedder(config);
  try {
    embedder.embed({"hello"});
    FAIL("expected remote_unavailable");
  } catch (const error& e) {
    CHECK(e.code() == errc::remote_unavailable);
  }
  RemoteJudge judge(config);
  try {
    judge.judge("hello");
    FAIL("expected remote_unavailable");
  } catch (const error& e) {
    CHECK(e.code() == errc::remote_unavailable);
  }
}

namespace {

// In-process embed/nli service for client tests.
class FakeService {
 public:
  FakeService() {
    server_.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
      auto body = nlohmann::json::parse(req.body);
      nlohmann::json vectors = nlohmann::json::array();
      for (const auto& text : body["texts"]) {
        double n = static_cast<double>(text.get<std::string>().size());
        vectors.push_back({n, 1.0, 0.0});
      }
      res.set_content(nlohmann::json{{"vectors", vectors}}.dump(), "application/json");
    });
    server_.Post("/nli", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = nlohmann::json::parse(req.body);
      last_hypothesis = body["hypothesis"].get<std::string>();
      nlohmann::json out{{"label", "contradiction"},
                         {"scores", {{"entailment", 0.1}, {"neutral", 0.2}, {"contradiction", 0.7}}}};
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeService() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  std::string last_hypothesis;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_CASE("remote embedder parses vectors in order") {
  FakeService service;
  RemoteConfig config;
  config.base_url = service.url();
  config.embed_batch = 2;  // force multiple batches
  RemoteEmbedder embedder(config);
  auto vs = embedder.embed({"a", "bb", "ccc", "dddd", "eeeee"});
  REQUIRE(vs.size() == 5);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    CHECK(vs[i].values == std::vector<double>{static_cast<double>(i + 1), 1.0, 0.0});
  }
}

TEST_CASE("remote judge maps the three-way label and validates scores") {
  FakeService service;
  RemoteConfig config;
  config.base_url = service.url();
  config.hypothesis = "This question has a single short factual answer.";
  RemoteJudge judge(config);
  auto verdict = judge.judge("Is water wet?");
  CHECK(verdict.label == NliLabel::Contradiction);
  CHECK(verdict.scores.at("contradiction") == doctest::Approx(0.7));
  CHECK(service.last_hypothesis == config.hypothesis);
}

TEST_CASE("backend factories reject unknown names") {
  RemoteConfig config;
  try {
    make_embedder("neural", config);
    FAIL("expected usage");
  } catch (const error& e) {
    CHECK(e.code() == errc::usage);
  }
  try {
    make_judge("oracle", config);
    FAIL("expected usage");
  } catch (const error& e) {
    CHECK(e.code() == errc::usage);
  }
}
