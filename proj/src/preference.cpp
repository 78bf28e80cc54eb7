#include "cuest/preference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "cuest/errors.hpp"

namespace cuest {

TopicRanking ranking_from_frequencies(const std::map<std::string, long>& freqs, const std::string& source,
                                      const TopicCatalog& topics) {
  for (const auto& topic : topics.topics()) {
    if (!freqs.count(topic)) raise(errc::missing_topic, "frequency map lacks topic '" + topic + "'");
  }

  // Sort topics by count descending; catalog order breaks ties only for the
  // walk itself, the averaged ranks make that order immaterial.
  std::vector<std::string> order = topics.topics();
  std::stable_sort(order.begin(), order.end(),
                   [&](const std::string& a, const std::string& b) { return freqs.at(a) > freqs.at(b); });

  TopicRanking ranking;
  ranking.source = source;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && freqs.at(order[j]) == freqs.at(order[i])) ++j;
    // positions i+1 .. j share the average rank
    double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranking.ranks[order[k]] = avg;
    i = j;
  }
  return ranking;
}

TopicRanking parse_ranking_file(const std::filesystem::path& path, const std::string& source,
                                const TopicCatalog& topics) {
  nlohmann::json doc;
  try {
    std::ifstream in(path);
    if (!in) raise(errc::missing_resource, "ranking file not found: " + path.string());
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::parse_error, path.string() + ": " + e.what());
  }
  if (!doc.is_array()) raise(errc::parse_error, path.string() + ": expected a JSON array of topics");

  TopicRanking ranking;
  ranking.source = source;
  double position = 0;
  for (const auto& entry : doc) {
    if (!entry.is_string()) raise(errc::parse_error, path.string() + ": non-string topic entry");
    std::string topic = entry.get<std::string>();
    if (!topics.contains(topic)) raise(errc::unknown_topic, path.string() + ": unknown topic '" + topic + "'");
    if (ranking.ranks.count(topic)) raise(errc::duplicate_topic, path.string() + ": duplicate topic '" + topic + "'");
    ranking.ranks[topic] = ++position;
  }
  for (const auto& topic : topics.topics()) {
    if (!ranking.ranks.count(topic)) raise(errc::missing_topic, path.string() + ": missing topic '" + topic + "'");
  }
  return ranking;
}

namespace {

// Rank vectors aligned on the shared topic set, iterated in map (sorted) order.
std::pair<std::vector<double>, std::vector<double>> aligned_ranks(const TopicRanking& a, const TopicRanking& b) {
  if (a.ranks.size() != b.ranks.size()) raise(errc::domain_mismatch, "rankings cover different topic sets");
  std::vector<double> ra, rb;
  ra.reserve(a.ranks.size());
  rb.reserve(b.ranks.size());
  for (const auto& [topic, rank] : a.ranks) {
    auto it = b.ranks.find(topic);
    if (it == b.ranks.end()) raise(errc::domain_mismatch, "rankings cover different topic sets");
    ra.push_back(rank);
    rb.push_back(it->second);
  }
  return {std::move(ra), std::move(rb)};
}

bool all_equal(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

std::optional<double> spearman(const TopicRanking& a, const TopicRanking& b) {
  auto [ra, rb] = aligned_ranks(a, b);
  const std::size_t n = ra.size();
  if (n == 0) raise(errc::domain_mismatch, "empty rankings");
  if (all_equal(ra) || all_equal(rb)) return std::nullopt;  // zero variance

  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += ra[i];
    mean_b += rb[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);

  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double da = ra[i] - mean_a;
    double db = rb[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  return cov / std::sqrt(var_a * var_b);
}

std::optional<double> kendall(const TopicRanking& a, const TopicRanking& b) {
  auto [ra, rb] = aligned_ranks(a, b);
  const std::size_t n = ra.size();
  if (n == 0) raise(errc::domain_mismatch, "empty rankings");
  if (all_equal(ra) || all_equal(rb)) return std::nullopt;

  long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = ra[i] - ra[j];
      double dy = rb[i] - rb[j];
      if (dx == 0.0 && dy == 0.0) continue;  // tied in both: excluded
      if (dx == 0.0) {
        ++ties_a;
      } else if (dy == 0.0) {
        ++ties_b;
      } else if (dx * dy > 0.0) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  double denom = std::sqrt(static_cast<double>(concordant + discordant + ties_a) *
                           static_cast<double>(concordant + discordant + ties_b));
  if (denom == 0.0) return std::nullopt;
  return static_cast<double>(concordant - discordant) / denom;
}

CorrelationTable correlation_table(
    const std::map<std::string, TopicRanking>& humans,
    const std::vector<std::pair<std::string, std::map<std::string, TopicRanking>>>& models) {
  CorrelationTable table;
  for (const auto& [model, by_country] : models) {
    if (by_country.size() != humans.size()) {
      raise(errc::country_mismatch, "model " + model + " covers a different country set than humans");
    }
    double rho_sum = 0.0, tau_sum = 0.0;
    std::size_t rho_n = 0, tau_n = 0;
    for (const auto& [country, human_ranking] : humans) {
      auto it = by_country.find(country);
      if (it == by_country.end()) {
        raise(errc::country_mismatch, "model " + model + " has no ranking for " + country);
      }
      CorrelationCell cell;
      cell.model = model;
      cell.country = country;
      cell.spearman = spearman(human_ranking, it->second);
      cell.kendall = kendall(human_ranking, it->second);
      if (cell.spearman) {
        rho_sum += *cell.spearman;
        ++rho_n;
      }
      if (cell.kendall) {
        tau_sum += *cell.kendall;
        ++tau_n;
      }
      table.cells.push_back(std::move(cell));
    }
    ModelCorrelationMean mean;
    mean.model = model;
    mean.countries = humans.size();
    if (rho_n > 0) mean.spearman = rho_sum / static_cast<double>(rho_n);
    if (tau_n > 0) mean.kendall = tau_sum / static_cast<double>(tau_n);
    table.means.push_back(std::move(mean));
  }
  return table;
}

}  // namespace cuest
