#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace cuest {

struct Embedding {
  std::vector<double> values;
};

// 0 when either vector has zero norm.
double cosine(const Embedding& a, const Embedding& b);

inline constexpr std::size_t kBuiltinEmbeddingDim = 256;

class Embedder {
 public:
  virtual ~Embedder() = default;
  // One embedding per text, order preserved. Throws empty_text / remote_unavailable.
  virtual std::vector<Embedding> embed(const std::vector<std::string>& texts) = 0;
  virtual std::string name() const = 0;
};

// Hashed term frequency over lowercased alphabetic tokens. Dimension 256,
// bucket = fnv1a64(token) % 256. Part of the external contract: golden files
// depend on this exact hash and dimension.
class HashedTfEmbedder final : public Embedder {
 public:
  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
  std::string name() const override { return "builtin"; }

  static std::size_t bucket_of(const std::string& token);
};

enum class NliLabel { Entailment, Neutral, Contradiction };

std::string_view to_string(NliLabel label);
NliLabel parse_nli_label(std::string_view label);  // throws parse_error

struct AnswerabilityVerdict {
  NliLabel label = NliLabel::Neutral;
  std::map<std::string, double> scores;  // empty when the backend gives none
};

class AnswerabilityJudge {
 public:
  virtual ~AnswerabilityJudge() = default;
  // Throws empty_text / remote_unavailable.
  virtual AnswerabilityVerdict judge(const std::string& question) = 0;
  virtual std::string name() const = 0;
};

// Entailment iff the question matches a pinned factoid-pattern list,
// else neutral. Patterns are whole-word subsequences on lowercased text.
class FactoidPatternJudge final : public AnswerabilityJudge {
 public:
  AnswerabilityVerdict judge(const std::string& question) override;
  std::string name() const override { return "heuristic"; }

  static const std::vector<std::string>& patterns();
};

struct RemoteConfig {
  std::string base_url;  // e.g. http://127.0.0.1:8080
  int timeout_seconds = 30;
  int max_retries = 2;    // extra attempts after the first failure
  int max_parallel = 4;   // concurrent batch requests in embed()
  std::size_t embed_batch = 64;
  std::string hypothesis = "This question has a single short factual answer.";
};

// POST {base}/embed  {"texts": [...]} -> {"vectors": [[...], ...]}
class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(RemoteConfig config) : config_(std::move(config)) {}
  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
  std::string name() const override { return "remote"; }

 private:
  RemoteConfig config_;
};

// POST {base}/nli  {"premise": q, "hypothesis": pinned} -> {"label": ..., "scores": {...}}
class RemoteJudge final : public AnswerabilityJudge {
 public:
  explicit RemoteJudge(RemoteConfig config) : config_(std::move(config)) {}
  AnswerabilityVerdict judge(const std::string& question) override;
  std::string name() const override { return "remote"; }

 private:
  RemoteConfig config_;
};

std::unique_ptr<Embedder> make_embedder(const std::string& backend, const RemoteConfig& config);
std::unique_ptr<AnswerabilityJudge> make_judge(const std::string& backend, const RemoteConfig& config);

}  // namespace cuest
