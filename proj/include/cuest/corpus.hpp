#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cuest/lexicons.hpp"

namespace cuest {

struct Question {
  std::string id;
  std::string country;
  std::string topic;
  std::string source;  // "human" or a model name
  std::string text;
};

struct GroupKey {
  std::string country;
  std::string source;

  auto operator<=>(const GroupKey&) const = default;
};

struct QuestionSet {
  GroupKey key;
  std::vector<Question> questions;  // input order preserved

  std::size_t size() const { return questions.size(); }
};

// The 16 canonical topics, fixed order.
class TopicCatalog {
 public:
  static const TopicCatalog& standard();
  explicit TopicCatalog(std::vector<std::string> topics);

  const std::vector<std::string>& topics() const { return topics_; }
  bool contains(const std::string& topic) const;
  std::size_t size() const { return topics_.size(); }

 private:
  std::vector<std::string> topics_;
};

enum class Region { Western, Eastern, LatinAmerican };

std::string_view to_string(Region region);
Region parse_region(std::string_view name);  // throws parse_error

// country -> region; fixed 18-country default, overridable via regions.json.
class RegionMap {
 public:
  static const RegionMap& standard();
  static RegionMap load(const std::filesystem::path& path);
  explicit RegionMap(std::map<std::string, Region> entries);

  Region region_of(const std::string& country) const;  // throws unknown_country
  bool supports(const std::string& country) const;
  const std::map<std::string, Region>& entries() const { return entries_; }

 private:
  std::map<std::string, Region> entries_;
};

enum class CorpusFormat { Jsonl, Csv };

CorpusFormat infer_corpus_format(const std::filesystem::path& path);

struct LoadReport {
  std::size_t total_records = 0;
  std::size_t valid_records = 0;
  std::size_t malformed = 0;
  std::size_t unknown_topic = 0;
  std::size_t unknown_country = 0;
  std::vector<std::string> messages;  // one per rejected record
};

// Groups records by (country, source), input order preserved within groups.
// Invalid records are skipped and counted; zero valid records is fatal.
std::vector<QuestionSet> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                                     const TopicCatalog& topics = TopicCatalog::standard(),
                                     const RegionMap& regions = RegionMap::standard(),
                                     LoadReport* report = nullptr);

// Per-topic question counts for one country; every canonical topic present.
std::map<std::string, long> topic_frequencies(const std::vector<QuestionSet>& sets,
                                              const TopicCatalog& topics = TopicCatalog::standard());

// Each token whose lowercase form is a synonym key is independently replaced
// with probability `rate`; everything else passes through untouched.
Question augment_synonym(const Question& q, const std::map<std::string, std::vector<std::string>>& synonyms,
                         double rate, std::uint64_t seed);

// `swaps` adjacent transpositions at positions drawn uniformly under `seed`.
Question augment_swap(const Question& q, int swaps, std::uint64_t seed);

}  // namespace cuest
