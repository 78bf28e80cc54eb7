#include "cuest/semantics.hpp"

#include <cmath>
#include <future>

#include "httplib.h"
#include "json.hpp"

#include "cuest/errors.hpp"
#include "cuest/text.hpp"

namespace cuest {

double cosine(const Embedding& a, const Embedding& b) {
  if (a.values.size() != b.values.size()) raise(errc::list_mismatch, "cosine over mismatched dimensions");
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    norm_a += a.values[i] * a.values[i];
    norm_b += b.values[i] * b.values[i];
  }
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  // sqrt of the product, not product of sqrts: identical integer-count
  // vectors then land on exactly 1.0.
  return dot / std::sqrt(norm_a * norm_b);
}

std::size_t HashedTfEmbedder::bucket_of(const std::string& token) {
  return static_cast<std::size_t>(fnv1a64(token) % kBuiltinEmbeddingDim);
}

std::vector<Embedding> HashedTfEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    if (trim(text).empty()) raise(errc::empty_text, "cannot embed empty text");
    Embedding e;
    e.values.assign(kBuiltinEmbeddingDim, 0.0);
    for (const auto& token : alpha_tokens(text)) {
      e.values[bucket_of(token)] += 1.0;
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string_view to_string(NliLabel label) {
  switch (label) {
    case NliLabel::Entailment: return "entailment";
    case NliLabel::Neutral: return "neutral";
    case NliLabel::Contradiction: return "contradiction";
  }
  return "neutral";
}

NliLabel parse_nli_label(std::string_view label) {
  if (label == "entailment") return NliLabel::Entailment;
  if (label == "neutral") return NliLabel::Neutral;
  if (label == "contradiction") return NliLabel::Contradiction;
  raise(errc::parse_error, "unknown NLI label: " + std::string(label));
}

const std::vector<std::string>& FactoidPatternJudge::patterns() {
  // Directly answerable factoid shapes. Matched as whole-word subsequences
  // on lowercased text; '*' spans any run of words.
  static const std::vector<std::string> list = {
      "what is the capital of",
      "what is the population of",
      "what year did",
      "in what year",
      "who wrote",
      "who invented",
      "who discovered",
      "who is the president of",
      "how many",
      "how tall is",
      "how old is",
      "how far is",
      "when was * born",
      "when was * built",
      "when was * founded",
      "when did * begin",
      "when did * end",
      "where is * located",
  };
  return list;
}

namespace {

bool contiguous_match_at(const std::vector<std::string>& tokens, std::size_t from,
                         const std::vector<std::string>& phrase, std::size_t* end) {
  for (std::size_t i = from; i + phrase.size() <= tokens.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < phrase.size(); ++j) {
      if (tokens[i + j] != phrase[j]) {
        match = false;
        break;
      }
    }
    if (match) {
      *end = i + phrase.size();
      return true;
    }
  }
  return false;
}

// Segments split on '*' must appear in order, each as a contiguous run,
// with at least one word inside every gap.
bool pattern_fires(const std::vector<std::string>& tokens, const std::string& pattern) {
  std::vector<std::vector<std::string>> segments;
  segments.emplace_back();
  for (const auto& raw : space_tokens(pattern)) {
    if (raw == "*") {
      segments.emplace_back();
    } else {
      for (auto& w : alpha_tokens(raw)) segments.back().push_back(std::move(w));
    }
  }
  std::size_t cursor = 0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (segments[s].empty()) continue;
    std::size_t next = 0;
    std::size_t from = s == 0 ? 0 : cursor + 1;  // a gap spans >= 1 word
    if (s == 0) {
      // leading segment may start anywhere
      if (!contiguous_match_at(tokens, 0, segments[s], &next)) return false;
    } else {
      if (from > tokens.size() || !contiguous_match_at(tokens, from, segments[s], &next)) return false;
    }
    cursor = next;
  }
  return true;
}

}  // namespace

AnswerabilityVerdict FactoidPatternJudge::judge(const std::string& question) {
  if (trim(question).empty()) raise(errc::empty_text, "cannot judge empty text");
  auto tokens = alpha_tokens(question);
  for (const auto& pattern : patterns()) {
    if (pattern_fires(tokens, pattern)) {
      return AnswerabilityVerdict{NliLabel::Entailment, {}};
    }
  }
  return AnswerabilityVerdict{NliLabel::Neutral, {}};
}

namespace {

nlohmann::json remote_post(const RemoteConfig& config, const std::string& route, const nlohmann::json& body) {
  if (config.base_url.empty()) raise(errc::usage, "remote backend selected but no remote URL configured");
  int attempts = config.max_retries + 1;
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt < attempts; ++attempt) {
    httplib::Client client(config.base_url);
    client.set_connection_timeout(config.timeout_seconds, 0);
    client.set_read_timeout(config.timeout_seconds, 0);
    client.set_write_timeout(config.timeout_seconds, 0);
    auto res = client.Post(route, body.dump(), "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "status " + std::to_string(res->status);
      continue;
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("bad response body: ") + e.what();
    }
  }
  raise(errc::remote_unavailable, config.base_url + route + ": " + last_error);
}

}  // namespace

std::vector<Embedding> RemoteEmbedder::embed(const std::vector<std::string>& texts) {
  for (const auto& text : texts) {
    if (trim(text).empty()) raise(errc::empty_text, "cannot embed empty text");
  }
  const std::size_t batch = config_.embed_batch == 0 ? 1 : config_.embed_batch;

  std::vector<std::vector<std::string>> batches;
  for (std::size_t i = 0; i < texts.size(); i += batch) {
    batches.emplace_back(texts.begin() + static_cast<std::ptrdiff_t>(i),
                         texts.begin() + static_cast<std::ptrdiff_t>(std::min(i + batch, texts.size())));
  }

  auto fetch = [this](const std::vector<std::string>& chunk) {
    auto doc = remote_post(config_, "/embed", nlohmann::json{{"texts", chunk}});
    if (!doc.contains("vectors") || !doc["vectors"].is_array() || doc["vectors"].size() != chunk.size()) {
      raise(errc::remote_unavailable, "embed response does not carry one vector per text");
    }
    std::vector<Embedding> vectors;
    for (const auto& v : doc["vectors"]) {
      Embedding e;
      e.values = v.get<std::vector<double>>();
      for (double x : e.values) {
        if (!std::isfinite(x)) raise(errc::remote_unavailable, "embed response carries non-finite entries");
      }
      vectors.push_back(std::move(e));
    }
    return vectors;
  };

  // Bounded fan-out; results are joined in request order.
  std::vector<Embedding> out;
  const std::size_t window = config_.max_parallel <= 1 ? 1 : static_cast<std::size_t>(config_.max_parallel);
  for (std::size_t begin = 0; begin < batches.size(); begin += window) {
    std::size_t end = std::min(begin + window, batches.size());
    std::vector<std::future<std::vector<Embedding>>> inflight;
    for (std::size_t i = begin; i < end; ++i) {
      inflight.push_back(std::async(std::launch::async, fetch, std::cref(batches[i])));
    }
    for (auto& f : inflight) {
      auto vectors = f.get();
      out.insert(out.end(), std::make_move_iterator(vectors.begin()), std::make_move_iterator(vectors.end()));
    }
  }

  for (const auto& e : out) {
    if (!out.empty() && e.values.size() != out.front().values.size()) {
      raise(errc::remote_unavailable, "embed response dimension varies within a run");
    }
  }
  return out;
}

AnswerabilityVerdict RemoteJudge::judge(const std::string& question) {
  if (trim(question).empty()) raise(errc::empty_text, "cannot judge empty text");
  auto doc = remote_post(config_, "/nli",
                         nlohmann::json{{"premise", question}, {"hypothesis", config_.hypothesis}});
  if (!doc.contains("label") || !doc["label"].is_string()) {
    raise(errc::remote_unavailable, "nli response has no label");
  }
  AnswerabilityVerdict verdict;
  verdict.label = parse_nli_label(doc["label"].get<std::string>());
  if (doc.contains("scores") && doc["scores"].is_object()) {
    double total = 0.0;
    for (const auto& [k, v] : doc["scores"].items()) {
      double score = v.get<double>();
      verdict.scores[k] = score;
      total += score;
    }
    if (!verdict.scores.empty() && std::abs(total - 1.0) > 1e-6) {
      raise(errc::remote_unavailable, "nli scores do not sum to 1");
    }
  }
  return verdict;
}

std::unique_ptr<Embedder> make_embedder(const std::string& backend, const RemoteConfig& config) {
  if (backend == "builtin") return std::make_unique<HashedTfEmbedder>();
  if (backend == "remote") return std::make_unique<RemoteEmbedder>(config);
  raise(errc::usage, "unknown embedder backend: " + backend);
}

std::unique_ptr<AnswerabilityJudge> make_judge(const std::string& backend, const RemoteConfig& config) {
  if (backend == "heuristic") return std::make_unique<FactoidPatternJudge>();
  if (backend == "remote") return std::make_unique<RemoteJudge>(config);
  raise(errc::usage, "unknown judge backend: " + backend);
}

}  // namespace cuest
