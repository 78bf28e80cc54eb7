#include "doctest.h"

#include <algorithm>
#include <cstring>

#include "cuest/errors.hpp"
#include "cuest/metrics.hpp"
#include "cuest/text.hpp"
#include "helpers.hpp"

using namespace cuest;

namespace {

const LexiconBundle& bundle() {
  static const LexiconBundle b = load_bundle(testutil::lexicon_dir());
  return b;
}

Question q(const std::string& text, const std::string& id = "q") {
  return Question{id, "Brazil", "Pets", "human", text};
}

QuestionSet set_of(const std::vector<std::string>& texts) {
  QuestionSet set{{"Brazil", "human"}, {}};
  int i = 0;
  for (const auto& text : texts) set.questions.push_back(q(text, "q" + std::to_string(++i)));
  return set;
}

HashedTfEmbedder& embedder() {
  static HashedTfEmbedder e;
  return e;
}

FactoidPatternJudge& judge() {
  static FactoidPatternJudge j;
  return j;
}

}  // namespace

TEST_CASE("content_words filters stopwords, keeps order and duplicates") {
  CHECK(content_words("Why is the sky blue?", bundle().stopwords) ==
        std::vector<std::string>{"sky", "blue"});
  CHECK(content_words("???", bundle().stopwords).empty());
  CHECK(content_words("bank the bank", bundle().stopwords) == std::vector<std::string>{"bank", "bank"});
}

TEST_CASE("ambiguity: hand-verified token-level cases") {
  LexiconBundle custom = bundle();
  custom.ambiguous_words = {"bat", "bank"};
  custom.pos_dict = {{"cross", {PosTag::Noun, PosTag::Verb}}};
  // content words [bat, cross, bank]: two list hits + one multi-tag word
  CHECK(ambiguity(q("Can a bat cross the bank?"), custom) == 1.0);

  custom.pos_dict.clear();
  CHECK(ambiguity(q("bank bank"), custom) == 1.0);  // duplicates counted per token
}

TEST_CASE("ambiguity: all plain single-tag words score zero") {
  LexiconBundle custom = bundle();
  custom.ambiguous_words.clear();
  custom.pos_dict.clear();
  CHECK(ambiguity(q("Why is the sky blue?"), custom) == 0.0);
}

TEST_CASE("ambiguity without content words is an error") {
  try {
    ambiguity(q("???"), bundle());
    FAIL("expected no_content_words");
  } catch (const error& e) {
    CHECK(e.code() == errc::no_content_words);
  }
}

TEST_CASE("ambiguity never decreases when an ambiguous word is appended") {
  LexiconBundle custom = bundle();
  SplitMix64 rng(5);
  std::vector<std::string> vocab{"sky", "blue", "bank", "stone", "river", "light", "bird"};
  for (int round = 0; round < 200; ++round) {
    std::string text;
    int words = 1 + static_cast<int>(rng.next_index(8));
    for (int i = 0; i < words; ++i) text += vocab[rng.next_index(vocab.size())] + " ";
    double before = ambiguity(q(text), custom);
    double after = ambiguity(q(text + " bank"), custom);  // bank is in the shipped list
    CHECK(after >= before - 1e-15);
  }
}

TEST_CASE("device detection: documented examples") {
  auto flags = detect_devices(q("Curiosity is like a key opening doors"), bundle());
  CHECK(flags.metaphor);
  CHECK(flags.total() == 1);

  flags = detect_devices(q("What drives curiosity? What sustains curiosity?"), bundle());
  CHECK(flags.parallelism);
  CHECK(flags.total() == 1);

  flags = detect_devices(q("Is water wet?"), bundle());
  CHECK(flags.total() == 0);

  flags = detect_devices(q("Why, why do we always repeat mistakes?"), bundle());
  CHECK(flags.repetition);

  flags = detect_devices(q("Who doesn't want to know more?"), bundle());
  CHECK(flags.rhetorical_question);

  flags = detect_devices(q("Curious cats constantly question everything"), bundle());
  CHECK(flags.alliteration);
}

TEST_CASE("rhetorical question needs the question mark") {
  CHECK_FALSE(detect_devices(q("Who doesn't want to know more."), bundle()).rhetorical_question);
  CHECK(detect_devices(q("Why do people never ask?"), bundle()).rhetorical_question);
  CHECK_FALSE(detect_devices(q("Do people never ask?"), bundle()).rhetorical_question);
}

TEST_CASE("device rate: zero, fractional, and the upper bound") {
  CHECK(rhetorical_device_rate(set_of({"Is water wet?", "Is fire hot today?"}), bundle()) == 0.0);
  CHECK(rhetorical_device_rate(set_of({"Why, why do we always repeat mistakes?", "Is water wet?"}), bundle()) ==
        0.5);
  std::string all_five =
      "Why, why do curious cats constantly question? "
      "Why, why do curious dogs never doubt, as if answers were toys?";
  auto flags = detect_devices(q(all_five), bundle());
  REQUIRE(flags.total() == 5);
  CHECK(rhetorical_device_rate(set_of({all_five}), bundle()) == 5.0);
}

TEST_CASE("device rate over an empty set is an error") {
  QuestionSet empty{{"Brazil", "human"}, {}};
  try {
    rhetorical_device_rate(empty, bundle());
    FAIL("expected empty_set");
  } catch (const error& e) {
    CHECK(e.code() == errc::empty_set);
  }
}

TEST_CASE("open-endedness: wh-start and non-entailment must both hold") {
  CHECK_FALSE(is_open_ended(q("What is the capital of Cambodia?"), bundle(), judge()));
  CHECK_FALSE(is_open_ended(q("Is curiosity innate?"), bundle(), judge()));
  CHECK(is_open_ended(q("Why do people fear change?"), bundle(), judge()));
  CHECK(is_open_ended(q("\"Which\" traditions still matter?"), bundle(), judge()));  // punctuation-stripped start
}

TEST_CASE("sentence split keeps nonempty trims and content sets") {
  auto split = split_sentences("The student read a book. The book was about science.", bundle().stopwords);
  REQUIRE(split.sentences.size() == 2);
  CHECK(split.sentences[0] == "The student read a book");
  CHECK(split.content_word_sets[0] == std::set<std::string>{"student", "read", "book"});
  CHECK(split.content_word_sets[1] == std::set<std::string>{"book", "science"});

  CHECK(split_sentences("One! Two? Three.", bundle().stopwords).sentences.size() == 3);
  CHECK(split_sentences("...", bundle().stopwords).sentences.empty());
}

TEST_CASE("cohesion: single sentence with no transitions scores zero") {
  auto score = cohesion(q("Why is the sky blue?"), bundle(), embedder());
  CHECK(score.value == 0.0);
  CHECK(score.lexical == 0.0);
  CHECK(score.semantic == 0.0);
}

TEST_CASE("cohesion: identical sentences reach exactly 2/3") {
  auto score = cohesion(q("Curiosity drives learning. Curiosity drives learning."), bundle(), embedder());
  CHECK(score.lexical == 1.0);
  CHECK(score.transition == 0.0);
  CHECK(score.semantic == 1.0);
  CHECK(score.value == 2.0 / 3.0);
}

TEST_CASE("cohesion: hand-verified Jaccard case") {
  auto score = cohesion(q("The student read a book. The book was about science."), bundle(), embedder());
  CHECK(score.lexical == 0.25);  // |{book}| / |{student,read,book,science}|
  CHECK(score.transition == 0.0);
  CHECK(score.semantic == 0.4);  // pinned builtin embedder, frozen via the reference script
  CHECK(score.value == doctest::Approx((0.25 + 0.0 + 0.4) / 3.0).epsilon(1e-15));
}

TEST_CASE("cohesion: transition tokens count per token and cap at 1") {
  auto single = cohesion(q("However, therefore, moreover: does structure help?"), bundle(), embedder());
  CHECK(single.transition == 3.0);
  CHECK(single.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));  // min(1, Tx)/3

  auto two = cohesion(q("We care. However, we also play."), bundle(), embedder());
  CHECK(two.transition == 0.5);  // one transition token over two sentences
}

TEST_CASE("profile of a singleton set equals that question's metrics") {
  auto result = profile_set(set_of({"Why do people fear change?"}), bundle(), embedder(), judge());
  CHECK(result.profile.n == 1);
  CHECK(result.profile.skipped == 0);
  CHECK(result.profile.ambiguity == ambiguity(q("Why do people fear change?"), bundle()));
  CHECK(result.profile.open_endedness == 1.0);
  CHECK(result.profile.rhetorical_devices ==
        static_cast<double>(detect_devices(q("Why do people fear change?"), bundle()).total()));
}

TEST_CASE("profile is invariant under question order") {
  std::vector<std::string> texts{"Why do people fear change?", "Is water wet?",
                                 "Curiosity drives learning. Curiosity drives learning.",
                                 "Can a bat cross the bank?"};
  auto a = profile(set_of(texts), bundle(), embedder(), judge());
  std::reverse(texts.begin(), texts.end());
  auto b = profile(set_of(texts), bundle(), embedder(), judge());
  CHECK(a.ambiguity == b.ambiguity);
  CHECK(a.rhetorical_devices == b.rhetorical_devices);
  CHECK(a.open_endedness == b.open_endedness);
  CHECK(a.cohesion == b.cohesion);
}

TEST_CASE("questions without content words are skipped, not fatal") {
  auto result = profile_set(set_of({"???", "Why do people fear change?"}), bundle(), embedder(), judge());
  CHECK(result.profile.n == 2);
  CHECK(result.profile.skipped == 1);
  CHECK(result.questions[0].skipped);
  CHECK_FALSE(result.questions[0].ambiguity.has_value());
  // the mean covers only the surviving question
  CHECK(result.profile.ambiguity == ambiguity(q("Why do people fear change?"), bundle()));
}

TEST_CASE("a set where everything is skipped is an error") {
  try {
    profile_set(set_of({"???", "!!!"}), bundle(), embedder(), judge());
    FAIL("expected all_skipped");
  } catch (const error& e) {
    CHECK(e.code() == errc::all_skipped);
  }
}

TEST_CASE("profiles are bitwise deterministic across runs") {
  auto texts = std::vector<std::string>{"Why do people fear change?", "Is water wet?",
                                        "The student read a book. The book was about science."};
  auto a = profile(set_of(texts), bundle(), embedder(), judge());
  auto b = profile(set_of(texts), bundle(), embedder(), judge());
  CHECK(std::memcmp(&a.ambiguity, &b.ambiguity, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.cohesion, &b.cohesion, sizeof(double)) == 0);
}

TEST_CASE("metric ranges hold on random token soups") {
  SplitMix64 rng(99);
  std::vector<std::string> vocab{"bank", "sky",  "why",   "like",  "however", "play", "the",
                                 "cats", "curious", "question", "never", "stop", "as", "if"};
  for (int round = 0; round < 300; ++round) {
    std::string text;
    int words = 1 + static_cast<int>(rng.next_index(14));
    for (int i = 0; i < words; ++i) {
      text += vocab[rng.next_index(vocab.size())];
      text += rng.next_index(6) == 0 ? ". " : " ";
    }
    if (rng.next_index(2) == 0) text += "?";
    QuestionSet set = set_of({text});
    ProfileResult result;
    try {
      result = profile_set(set, bundle(), embedder(), judge());
    } catch (const error& e) {
      CHECK(e.code() == errc::all_skipped);
      continue;
    }
    const auto& p = result.profile;
    CHECK(p.ambiguity >= 0.0);
    CHECK(p.ambiguity <= 2.0);
    CHECK(p.rhetorical_devices >= 0.0);
    CHECK(p.rhetorical_devices <= 5.0);
    CHECK(p.open_endedness >= 0.0);
    CHECK(p.open_endedness <= 1.0);
    CHECK(p.cohesion >= 0.0);
    CHECK(p.cohesion <= 1.0);
  }
}

TEST_CASE("remote embedder failures skip affected questions under the skip policy") {
  RemoteConfig config;
  config.base_url = "http://127.0.0.1:9";  // nothing listens
  config.timeout_seconds = 1;
  config.max_retries = 0;
  RemoteEmbedder dead_embedder(config);

  // one multi-sentence question (needs the embedder) and one single-sentence
  auto set = set_of({"The student read a book. The book was about science.",
                     "Why do people fear change?"});
  ProfileOptions skip;
  skip.on_remote_error = RemoteErrorPolicy::Skip;
  auto result = profile_set(set, bundle(), dead_embedder, judge(), skip);
  CHECK(result.profile.n == 2);
  CHECK(result.profile.skipped == 1);
  CHECK(result.questions[0].skipped);
  CHECK_FALSE(result.questions[1].skipped);
  // device rate keeps the full-set denominator even with a skip
  long flags = detect_devices(set.questions[0], bundle()).total() +
               detect_devices(set.questions[1], bundle()).total();
  CHECK(result.profile.rhetorical_devices == static_cast<double>(flags) / 2.0);

  // fail policy propagates instead
  ProfileOptions fail;
  try {
    profile_set(set, bundle(), dead_embedder, judge(), fail);
    FAIL("expected remote_unavailable");
  } catch (const error& e) {
    CHECK(e.code() == errc::remote_unavailable);
  }
}

TEST_CASE("profile ambiguity equals the independent mean of per-question values") {
  auto result = profile_set(set_of({"Can a bat cross the bank?", "Why do people fear change?",
                                    "Is water wet?", "???"}),
                            bundle(), embedder(), judge());
  double sum = 0.0;
  std::size_t kept = 0;
  for (const auto& row : result.questions) {
    if (row.ambiguity) {
      sum += *row.ambiguity;
      ++kept;
    }
  }
  CHECK(kept == 3);
  CHECK(result.profile.ambiguity == sum / static_cast<double>(kept));
}
