#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cuest/corpus.hpp"
#include "cuest/lexicons.hpp"
#include "cuest/semantics.hpp"

namespace cuest {

// Per-question binary stylistic flags.
struct DeviceFlags {
  bool repetition = false;
  bool rhetorical_question = false;
  bool alliteration = false;
  bool parallelism = false;
  bool metaphor = false;

  int total() const {
    return int(repetition) + int(rhetorical_question) + int(alliteration) + int(parallelism) + int(metaphor);
  }
};

struct SentenceSplit {
  std::vector<std::string> sentences;                      // nonempty trims, original order
  std::vector<std::set<std::string>> content_word_sets;    // lowercased non-stopword alphabetic tokens
};

struct CohesionScore {
  double lexical = 0.0;     // mean adjacent Jaccard
  double transition = 0.0;  // transition tokens per sentence, uncapped
  double semantic = 0.0;    // mean adjacent cosine, clamped to [0,1]
  double value = 0.0;       // (lexical + min(1, transition) + semantic) / 3
};

struct LinguisticProfile {
  double ambiguity = 0.0;           // mean L, [0,2]
  double rhetorical_devices = 0.0;  // RD over the full set, [0,5]
  double open_endedness = 0.0;      // mean open-ended indicator, [0,1]
  double cohesion = 0.0;            // mean cohesion value, [0,1]
  std::size_t n = 0;
  std::size_t skipped = 0;          // excluded questions (no content words / remote skip)
};

// Row of the per-question audit dump. Empty optionals mean the question was
// excluded from that metric.
struct QuestionMetrics {
  std::string id;
  std::optional<double> ambiguity;
  DeviceFlags devices;
  std::optional<bool> open_ended;
  std::optional<CohesionScore> cohesion;
  bool skipped = false;
};

// Lowercased alphabetic tokens minus stopwords; order and duplicates kept.
std::vector<std::string> content_words(std::string_view text, const std::set<std::string>& stopwords);

// Lexical ambiguity: (hits in the ambiguous list + tokens with more than one
// dictionary POS tag) / content-token count. Unknown words count one tag.
// Throws no_content_words when nothing survives filtering.
double ambiguity(const Question& q, const LexiconBundle& bundle);

DeviceFlags detect_devices(const Question& q, const LexiconBundle& bundle);

// Set-level device rate: flag sums over the whole set divided by n.
double rhetorical_device_rate(const QuestionSet& set, const LexiconBundle& bundle);

// Open-ended iff the first token is a wh-word and the judge does not call the
// question directly answerable.
bool is_open_ended(const Question& q, const LexiconBundle& bundle, AnswerabilityJudge& judge);

// Split on '.', '!' and '?', keeping nonempty trims.
SentenceSplit split_sentences(std::string_view text, const std::set<std::string>& stopwords);

CohesionScore cohesion(const Question& q, const LexiconBundle& bundle, Embedder& embedder);

enum class RemoteErrorPolicy { Fail, Skip };

struct ProfileOptions {
  RemoteErrorPolicy on_remote_error = RemoteErrorPolicy::Fail;
};

struct ProfileResult {
  LinguisticProfile profile;
  std::vector<QuestionMetrics> questions;  // input order
};

// Per-question metrics averaged over non-skipped questions; the device rate
// keeps the full-set denominator. Throws all_skipped when nothing survives.
ProfileResult profile_set(const QuestionSet& set, const LexiconBundle& bundle, Embedder& embedder,
                          AnswerabilityJudge& judge, const ProfileOptions& options = {});

inline LinguisticProfile profile(const QuestionSet& set, const LexiconBundle& bundle, Embedder& embedder,
                                 AnswerabilityJudge& judge, const ProfileOptions& options = {}) {
  return profile_set(set, bundle, embedder, judge, options).profile;
}

}  // namespace cuest
