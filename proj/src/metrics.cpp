#include "cuest/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cuest/errors.hpp"
#include "cuest/text.hpp"

namespace cuest {

namespace {

void ensure_range(double value, double lo, double hi, const char* what) {
  if (!(value >= lo && value <= hi)) {
    raise(errc::invalid_spec,
          std::string(what) + " out of range [" + format6(lo) + "," + format6(hi) + "]: " + format6(value));
  }
}

}  // namespace

std::vector<std::string> content_words(std::string_view text, const std::set<std::string>& stopwords) {
  std::vector<std::string> out;
  for (auto& token : alpha_tokens(text)) {
    if (!stopwords.count(token)) out.push_back(std::move(token));
  }
  return out;
}

double ambiguity(const Question& q, const LexiconBundle& bundle) {
  auto words = content_words(q.text, bundle.stopwords);
  if (words.empty()) raise(errc::no_content_words, "no content words in question " + q.id);

  long hits = 0;
  for (const auto& w : words) {
    if (bundle.ambiguous_words.count(w)) ++hits;
    auto it = bundle.pos_dict.find(w);
    if (it != bundle.pos_dict.end() && it->second.size() > 1) ++hits;
  }
  double value = static_cast<double>(hits) / static_cast<double>(words.size());
  ensure_range(value, 0.0, 2.0, "ambiguity");
  return value;
}

namespace {

bool has_immediate_repetition(const std::vector<std::string>& tokens) {
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i] == tokens[i - 1]) return true;
  }
  return false;
}

// Negative interrogative: opens with who/what/why and carries a negation,
// or starts with one of the pinned rhetorical openers.
bool is_rhetorical_question(const std::string& text, const std::vector<std::string>& tokens) {
  std::string trimmed = trim(text);
  if (trimmed.empty() || trimmed.back() != '?') return false;
  if (tokens.empty()) return false;

  static const std::vector<std::vector<std::string>> openers = {
      {"who", "doesn", "t"}, {"who", "wouldn", "t"}, {"isn", "t", "it"}, {"don", "t", "we"}};
  for (const auto& opener : openers) {
    if (tokens.size() >= opener.size() && std::equal(opener.begin(), opener.end(), tokens.begin())) return true;
  }

  static const std::set<std::string> leads = {"who", "what", "why"};
  if (!leads.count(tokens[0])) return false;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i] == "not" || tokens[i] == "never" || tokens[i] == "cannot") return true;
    // contraction negative: "...n" followed by the clipped "t" (don't, isn't)
    if (tokens[i] == "t" && !tokens[i - 1].empty() && tokens[i - 1].back() == 'n') return true;
  }
  return false;
}

bool has_alliteration(const std::vector<std::string>& content) {
  int run = 0;
  char current = 0;
  for (const auto& w : content) {
    if (run > 0 && w.front() == current) {
      ++run;
    } else {
      current = w.front();
      run = 1;
    }
    if (run >= 3) return true;
  }
  return false;
}

std::vector<std::vector<std::string>> clause_tokens(std::string_view text) {
  std::vector<std::vector<std::string>> clauses;
  std::string current;
  auto flush = [&] {
    auto tokens = alpha_tokens(current);
    if (!tokens.empty()) clauses.push_back(std::move(tokens));
    current.clear();
  };
  for (char c : text) {
    if (c == '?' || c == '.' || c == ';') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return clauses;
}

// Parallel clauses: identical two-token opening, or identical opening token
// with equal length ("What drives curiosity? What sustains curiosity?").
bool has_parallelism(std::string_view text) {
  auto clauses = clause_tokens(text);
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    for (std::size_t j = i + 1; j < clauses.size(); ++j) {
      const auto& a = clauses[i];
      const auto& b = clauses[j];
      if (a.size() < 2 || b.size() < 2) continue;
      if (a[0] == b[0] && a[1] == b[1]) return true;
      if (a[0] == b[0] && a.size() == b.size()) return true;
    }
  }
  return false;
}

bool has_metaphor_marker(const std::vector<std::string>& tokens, const std::vector<std::string>& markers) {
  for (const auto& marker : markers) {
    auto phrase = alpha_tokens(marker);
    if (phrase.empty() || phrase.size() > tokens.size()) continue;
    for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
      if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) return true;
    }
  }
  return false;
}

}  // namespace

DeviceFlags detect_devices(const Question& q, const LexiconBundle& bundle) {
  DeviceFlags flags;
  auto tokens = alpha_tokens(q.text);
  flags.repetition = has_immediate_repetition(tokens);
  flags.rhetorical_question = is_rhetorical_question(q.text, tokens);
  flags.alliteration = has_alliteration(content_words(q.text, bundle.stopwords));
  flags.parallelism = has_parallelism(q.text);
  flags.metaphor = has_metaphor_marker(tokens, bundle.metaphor_markers);
  return flags;
}

double rhetorical_device_rate(const QuestionSet& set, const LexiconBundle& bundle) {
  if (set.questions.empty()) raise(errc::empty_set, "device rate over an empty set");
  long total = 0;
  for (const auto& q : set.questions) total += detect_devices(q, bundle).total();
  double rate = static_cast<double>(total) / static_cast<double>(set.questions.size());
  ensure_range(rate, 0.0, 5.0, "rhetorical device rate");
  return rate;
}

bool is_open_ended(const Question& q, const LexiconBundle& bundle, AnswerabilityJudge& judge) {
  auto tokens = alpha_tokens(q.text);
  if (tokens.empty() || !bundle.wh_words.count(tokens.front())) return false;
  return judge.judge(q.text).label != NliLabel::Entailment;
}

SentenceSplit split_sentences(std::string_view text, const std::set<std::string>& stopwords) {
  SentenceSplit split;
  std::string current;
  auto flush = [&] {
    std::string sentence = trim(current);
    current.clear();
    if (sentence.empty()) return;
    std::set<std::string> content;
    for (auto& w : content_words(sentence, stopwords)) content.insert(std::move(w));
    split.sentences.push_back(std::move(sentence));
    split.content_word_sets.push_back(std::move(content));
  };
  for (char c : text) {
    if (c == '.' || c == '!' || c == '?') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return split;
}

CohesionScore cohesion(const Question& q, const LexiconBundle& bundle, Embedder& embedder) {
  CohesionScore score;
  auto split = split_sentences(q.text, bundle.stopwords);
  const std::size_t m = split.sentences.size();
  if (m == 0) return score;  // no sentence content at all

  // Transition rate: transition tokens per sentence, duplicates counted.
  long transition_tokens = 0;
  for (const auto& sentence : split.sentences) {
    for (const auto& token : alpha_tokens(sentence)) {
      if (bundle.transitions.count(token)) ++transition_tokens;
    }
  }
  score.transition = static_cast<double>(transition_tokens) / static_cast<double>(m);

  if (m >= 2) {
    double jaccard_sum = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const auto& a = split.content_word_sets[i];
      const auto& b = split.content_word_sets[i + 1];
      std::size_t hits = 0;
      for (const auto& w : a) {
        if (b.count(w)) ++hits;
      }
      std::size_t unions = a.size() + b.size() - hits;
      jaccard_sum += unions == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(unions);
    }
    score.lexical = jaccard_sum / static_cast<double>(m - 1);

    auto embeddings = embedder.embed(split.sentences);
    double cos_sum = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      cos_sum += std::clamp(cosine(embeddings[i], embeddings[i + 1]), 0.0, 1.0);
    }
    score.semantic = cos_sum / static_cast<double>(m - 1);
  }
  // m == 1 leaves the adjacency components at 0 so the score stays defined.

  score.value = (score.lexical + std::min(1.0, score.transition) + score.semantic) / 3.0;
  ensure_range(score.lexical, 0.0, 1.0, "lexical cohesion");
  ensure_range(score.semantic, 0.0, 1.0, "semantic cohesion");
  ensure_range(score.value, 0.0, 1.0, "cohesion");
  return score;
}

ProfileResult profile_set(const QuestionSet& set, const LexiconBundle& bundle, Embedder& embedder,
                          AnswerabilityJudge& judge, const ProfileOptions& options) {
  if (set.questions.empty()) raise(errc::empty_set, "profile over an empty set");

  ProfileResult result;
  result.profile.n = set.questions.size();

  double ambiguity_sum = 0.0, open_sum = 0.0, cohesion_sum = 0.0;
  long device_sum = 0;
  std::size_t kept = 0;

  for (const auto& q : set.questions) {
    QuestionMetrics row;
    row.id = q.id;
    row.devices = detect_devices(q, bundle);
    device_sum += row.devices.total();

    bool skip = false;
    try {
      row.ambiguity = ambiguity(q, bundle);
    } catch (const error& e) {
      if (e.code() != errc::no_content_words) throw;
      skip = true;
    }
    if (!skip) {
      try {
        row.open_ended = is_open_ended(q, bundle, judge);
        row.cohesion = cohesion(q, bundle, embedder);
      } catch (const error& e) {
        if (e.code() == errc::remote_unavailable && options.on_remote_error == RemoteErrorPolicy::Skip) {
          skip = true;
          row.ambiguity.reset();
          row.open_ended.reset();
          row.cohesion.reset();
        } else {
          throw;
        }
      }
    }

    row.skipped = skip;
    if (!skip) {
      ++kept;
      ambiguity_sum += *row.ambiguity;
      open_sum += *row.open_ended ? 1.0 : 0.0;
      cohesion_sum += row.cohesion->value;
    }
    result.questions.push_back(std::move(row));
  }

  result.profile.skipped = set.questions.size() - kept;
  if (kept == 0) raise(errc::all_skipped, "every question in the set was excluded");

  result.profile.ambiguity = ambiguity_sum / static_cast<double>(kept);
  result.profile.open_endedness = open_sum / static_cast<double>(kept);
  result.profile.cohesion = cohesion_sum / static_cast<double>(kept);
  result.profile.rhetorical_devices =
      static_cast<double>(device_sum) / static_cast<double>(set.questions.size());

  ensure_range(result.profile.ambiguity, 0.0, 2.0, "ambiguity");
  ensure_range(result.profile.rhetorical_devices, 0.0, 5.0, "rhetorical device rate");
  ensure_range(result.profile.open_endedness, 0.0, 1.0, "open-endedness");
  ensure_range(result.profile.cohesion, 0.0, 1.0, "cohesion");
  return result;
}

}  // namespace cuest
