#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "helpers.hpp"

namespace {

std::string cli_binary() {
  const char* bin = std::getenv("CUEST_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "CUEST_BIN must point at the cuest binary");
  return bin;
}

int run(const std::string& args) {
  std::string command = cli_binary() + " " + args + " >/dev/null 2>&1";
  int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("linguistic: missing corpus file exits 2") {
  testutil::TempDir out;
  CHECK(run("linguistic --corpus /nonexistent/corpus.jsonl --lexicons " +
            q(testutil::lexicon_dir()) + " --out " + q(out.path() / "o")) == 2);
}

TEST_CASE("linguistic: remote embedder without a URL exits 1") {
  testutil::TempDir out;
  CHECK(run("linguistic --corpus " + q(testutil::fixture_dir() / "corpus_human.jsonl") +
            " --corpus " + q(testutil::fixture_dir() / "corpus_model.jsonl") + " --lexicons " +
            q(testutil::lexicon_dir()) + " --embedder remote --out " + q(out.path() / "o")) == 1);
}

TEST_CASE("linguistic: fixture corpus produces the documented report files") {
  testutil::TempDir out;
  auto dir = out.path() / "o";
  CHECK(run("linguistic --corpus " + q(testutil::fixture_dir() / "corpus_human.jsonl") +
            " --corpus " + q(testutil::fixture_dir() / "corpus_model.jsonl") + " --lexicons " +
            q(testutil::lexicon_dir()) + " --out " + q(dir)) == 0);
  for (const char* name : {"questions.csv", "profiles.csv", "alignment.csv", "model_ranking.csv",
                           "profiles_by_metric.tsv", "country_mae.tsv", "region_mae.tsv",
                           "model_distances.tsv", "report.json", "run_meta.json"}) {
    CHECK_MESSAGE(std::filesystem::exists(dir / name), name);
  }
  auto meta = nlohmann::json::parse(testutil::slurp(dir / "run_meta.json"));
  CHECK(meta.contains("config_hash"));
  CHECK(meta["rules"].contains("devices"));
}

TEST_CASE("two runs with the same config are byte-identical") {
  testutil::TempDir out;
  auto first = out.path() / "a";
  auto second = out.path() / "b";
  std::string shared = "linguistic --corpus " + q(testutil::fixture_dir() / "corpus_human.jsonl") +
                       " --corpus " + q(testutil::fixture_dir() / "corpus_model.jsonl") +
                       " --lexicons " + q(testutil::lexicon_dir());
  REQUIRE(run(shared + " --out " + q(first)) == 0);
  REQUIRE(run(shared + " --out " + q(second)) == 0);
  for (const auto& entry : std::filesystem::directory_iterator(first)) {
    auto name = entry.path().filename();
    CHECK_MESSAGE(testutil::slurp(entry.path()) == testutil::slurp(second / name), name.string());
  }
}

TEST_CASE("topics: malformed ranking file exits 2") {
  testutil::TempDir out;
  auto rankings = out.path() / "rankings" / "model-x";
  std::filesystem::create_directories(rankings);
  {
    std::ofstream bad(rankings / "Brazil.json");
    bad << "[\"Pets\", \"Pets\"]";
  }
  CHECK(run("topics --corpus " + q(testutil::fixture_dir() / "corpus_human.jsonl") + " --rankings " +
            q(out.path() / "rankings") + " --out " + q(out.path() / "o")) == 2);
}

TEST_CASE("topics: fixture run emits correlations") {
  testutil::TempDir out;
  auto dir = out.path() / "o";
  CHECK(run("topics --corpus " + q(testutil::fixture_dir() / "corpus_human.jsonl") + " --rankings " +
            q(testutil::fixture_dir() / "rankings") + " --out " + q(dir)) == 0);
  auto doc = nlohmann::json::parse(testutil::slurp(dir / "correlations.json"));
  CHECK(doc["country_weighting"] == "unweighted");
  CHECK(doc["cells"].size() == 3);
  CHECK(doc["means"].size() == 1);
}

TEST_CASE("constructs: missing mapping exits 1, theta=1 forces Mixed everywhere") {
  testutil::TempDir out;
  std::string base = "constructs --corpus " + q(testutil::fixture_dir() / "corpus_human.jsonl") +
                     " --corpus " + q(testutil::fixture_dir() / "corpus_model.jsonl") +
                     " --categories " + q(testutil::data_dir() / "lexicons" / "categories.dic") +
                     " --expectations " + q(testutil::fixture_dir() / "expectations_fixture.json");
  CHECK(run(base + " --out " + q(out.path() / "missing")) == 1);

  auto dir = out.path() / "theta";
  CHECK(run(base + " --mapping " + q(testutil::data_dir() / "construct_mapping.json") +
            " --theta 1.0 --out " + q(dir)) == 0);
  auto verdicts = nlohmann::json::parse(testutil::slurp(dir / "verdicts.json"));
  for (const auto& row : verdicts["rows"]) {
    for (const auto& [source, cell] : row["verdicts"].items()) {
      std::string where = row["dimension"].get<std::string>() + "/" + source + " at theta=1.0";
      CHECK_MESSAGE(cell["verdict"] == "Mixed", where);
    }
  }
}

TEST_CASE("annotation: fixture rates and agreement are reported") {
  testutil::TempDir out;
  auto dir = out.path() / "o";
  CHECK(run("annotation --annotations " + q(testutil::fixture_dir() / "annotations.csv") + " --out " +
            q(dir)) == 0);
  auto report = nlohmann::json::parse(testutil::slurp(dir / "annotation_report.json"));
  CHECK(report["tie_policy"] == "positive");
  CHECK(report["models"]["adapter-ft"]["responses"] == 12);
  CHECK(report["models"]["adapter-ft"]["curiosity_rate"].get<double>() ==
        doctest::Approx(11.0 / 12.0).epsilon(1e-6));
  CHECK(report["models"]["full-ft"]["curiosity_rate"].get<double>() == doctest::Approx(0.25));
  CHECK(report["percent_agreement"]["has_question"].get<double>() > 0.0);
}

TEST_CASE("unknown flags exit 1") {
  CHECK(run("linguistic --frobnicate") == 1);
  CHECK(run("") == 1);
}

TEST_CASE("version flag prints and exits cleanly") {
  std::string command = cli_binary() + " --version >/dev/null 2>&1";
  int status = std::system(command.c_str());
  CHECK(WEXITSTATUS(status) == 0);
}

namespace {

// Minimal embed/nli service for end-to-end remote runs.
class CliFakeService {
 public:
  CliFakeService() {
    server_.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
      auto body = nlohmann::json::parse(req.body);
      nlohmann::json vectors = nlohmann::json::array();
      for (const auto& text : body["texts"]) {
        std::string s = text.get<std::string>();
        double a = static_cast<double>(s.size() % 17);
        double b = static_cast<double>(s.size() % 5);
        vectors.push_back({a + 1.0, b, 1.0});
      }
      res.set_content(nlohmann::json{{"vectors", vectors}}.dump(), "application/json");
    });
    server_.Post("/nli", [](const httplib::Request&, httplib::Response& res) {
      nlohmann::json out{{"label", "neutral"},
                         {"scores", {{"entailment", 0.2}, {"neutral", 0.5}, {"contradiction", 0.3}}}};
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~CliFakeService() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_CASE("linguistic runs end-to-end with remote backends") {
  CliFakeService service;
  testutil::TempDir out;
  auto dir = out.path() / "remote";
  CHECK(run("linguistic --corpus " + q(testutil::fixture_dir() / "corpus_human.jsonl") +
            " --corpus " + q(testutil::fixture_dir() / "corpus_model.jsonl") + " --lexicons " +
            q(testutil::lexicon_dir()) + " --embedder remote --judge remote --remote-url " +
            service.url() + " --out " + q(dir)) == 0);
  REQUIRE(std::filesystem::exists(dir / "profiles.csv"));
  // the remote judge never answers "entailment", so every wh-start question counts open-ended
  auto profiles = testutil::slurp(dir / "profiles.csv");
  CHECK(profiles.find("Brazil,human") != std::string::npos);
  auto meta = nlohmann::json::parse(testutil::slurp(dir / "run_meta.json"));
  CHECK(meta["config"]["embedder"] == "remote");
  CHECK(meta["config"]["judge"] == "remote");
}

TEST_CASE("remote failures with skip policy keep single-sentence questions") {
  testutil::TempDir out;
  auto dir = out.path() / "skip";
  // dead endpoint: multi-sentence questions lose their embeddings and are
  // skipped; single-sentence ones never need the embedder
  CHECK(run("linguistic --corpus " + q(testutil::fixture_dir() / "corpus_human.jsonl") +
            " --corpus " + q(testutil::fixture_dir() / "corpus_model.jsonl") + " --lexicons " +
            q(testutil::lexicon_dir()) +
            " --embedder remote --remote-url http://127.0.0.1:9 --remote-timeout 1 " +
            "--on-remote-error skip --out " + q(dir)) == 0);
  auto profiles = testutil::slurp(dir / "profiles.csv");
  // Brazil humans have multi-sentence questions; the skipped column is nonzero
  CHECK(profiles.find("Brazil,human,20,0") == std::string::npos);

  // with the fail policy the same run aborts with the remote exit code
  CHECK(run("linguistic --corpus " + q(testutil::fixture_dir() / "corpus_human.jsonl") +
            " --corpus " + q(testutil::fixture_dir() / "corpus_model.jsonl") + " --lexicons " +
            q(testutil::lexicon_dir()) +
            " --embedder remote --remote-url http://127.0.0.1:9 --remote-timeout 1 " +
            "--on-remote-error fail --out " + q(out.path() / "fail")) == 3);
}

TEST_CASE("raw normalization and a custom region map plumb through") {
  testutil::TempDir out;
  auto dir = out.path() / "raw";
  CHECK(run("linguistic --corpus " + q(testutil::fixture_dir() / "corpus_human.jsonl") +
            " --corpus " + q(testutil::fixture_dir() / "corpus_model.jsonl") + " --lexicons " +
            q(testutil::lexicon_dir()) + " --normalize raw --regions " +
            q(testutil::data_dir() / "regions.json") + " --out " + q(dir)) == 0);
  auto meta = nlohmann::json::parse(testutil::slurp(dir / "run_meta.json"));
  CHECK(meta["config"]["normalize"] == "raw");
  CHECK(meta["config"]["regions"]["file"] == "regions.json");
  // raw and unit rankings agree on the single fixture model; ranking file present
  CHECK(std::filesystem::exists(dir / "model_ranking.csv"));
}
