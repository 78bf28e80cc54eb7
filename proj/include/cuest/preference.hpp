#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cuest/corpus.hpp"

namespace cuest {

// topic -> rank; 1 = most preferred, ties carry average ranks, so a full
// 16-topic ranking always sums to 136.
struct TopicRanking {
  std::map<std::string, double> ranks;
  std::string source;
};

// Higher count -> smaller rank; equal counts share the mean of the positions
// they occupy. Throws missing_topic when a catalog topic is absent.
TopicRanking ranking_from_frequencies(const std::map<std::string, long>& freqs, const std::string& source,
                                      const TopicCatalog& topics = TopicCatalog::standard());

// JSON array of all topic names ordered most to least preferred.
TopicRanking parse_ranking_file(const std::filesystem::path& path, const std::string& source,
                                const TopicCatalog& topics = TopicCatalog::standard());

// Pearson correlation of the rank vectors (tie-safe). nullopt when a ranking
// is a full tie: the coefficient is undefined there, never coerced to 0.
std::optional<double> spearman(const TopicRanking& a, const TopicRanking& b);

// Kendall tau-b: (C - D) / sqrt((C+D+Ta)(C+D+Tb)). Same undefined rule.
std::optional<double> kendall(const TopicRanking& a, const TopicRanking& b);

struct CorrelationCell {
  std::string model;
  std::string country;
  std::optional<double> spearman;
  std::optional<double> kendall;
};

struct ModelCorrelationMean {
  std::string model;
  std::optional<double> spearman;  // unweighted over countries with a defined value
  std::optional<double> kendall;
  std::size_t countries = 0;
};

struct CorrelationTable {
  std::vector<CorrelationCell> cells;        // models in input order, countries alphabetical
  std::vector<ModelCorrelationMean> means;
};

CorrelationTable correlation_table(
    const std::map<std::string, TopicRanking>& humans,
    const std::vector<std::pair<std::string, std::map<std::string, TopicRanking>>>& models);

}  // namespace cuest
