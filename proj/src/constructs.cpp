#include "cuest/constructs.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

#include "cuest/errors.hpp"
#include "cuest/text.hpp"

namespace cuest {

CategoryRates category_rates(const QuestionSet& set, const CategoryLexicon& lexicon) {
  if (lexicon.categories.empty()) raise(errc::empty_lexicon, "category lexicon has no categories");
  if (set.questions.empty()) raise(errc::empty_set, "category rates over an empty set");

  CategoryRates rates;
  std::map<std::string, long> hits;
  for (const auto& [category, patterns] : lexicon.categories) hits[category] = 0;

  long total_tokens = 0;
  for (const auto& q : set.questions) {
    for (const auto& token : alpha_tokens(q.text)) {
      ++total_tokens;
      for (const auto& [category, patterns] : lexicon.categories) {
        for (const auto& pattern : patterns) {
          if (pattern_matches(pattern, token)) {
            ++hits[category];
            break;  // one hit per category per token
          }
        }
      }
    }
  }

  for (const auto& [category, count] : hits) {
    rates[category] = total_tokens == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total_tokens);
  }
  return rates;
}

ConstructMapping load_construct_mapping(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    std::ifstream in(path);
    if (!in) raise(errc::missing_resource, "construct mapping not found: " + path.string());
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::parse_error, path.string() + ": " + e.what());
  }
  if (!doc.is_object()) raise(errc::parse_error, path.string() + ": expected {dimension: {category: weight}}");

  ConstructMapping mapping;
  for (const auto& [dimension, weights] : doc.items()) {
    if (!weights.is_object()) {
      raise(errc::parse_error, path.string() + ": weights for " + dimension + " are not an object");
    }
    for (const auto& [category, weight] : weights.items()) {
      if (!weight.is_number()) {
        raise(errc::parse_error, path.string() + ": weight " + dimension + "/" + category + " is not a number");
      }
      mapping[dimension][lower(category)] = weight.get<double>();
    }
  }
  if (mapping.empty()) raise(errc::parse_error, path.string() + ": empty mapping");
  return mapping;
}

ConstructScores construct_scores(const CategoryRates& rates, const ConstructMapping& mapping) {
  ConstructScores scores;
  for (const auto& [dimension, weights] : mapping) {
    double value = 0.0;
    for (const auto& [category, weight] : weights) {
      auto it = rates.find(category);
      if (it == rates.end()) {
        raise(errc::unknown_category, "mapping for " + dimension + " references unknown category '" + category + "'");
      }
      value += weight * it->second;
    }
    scores.values[dimension] = value;
  }
  return scores;
}

std::map<GroupKey, ConstructScores> group_construct_table(const std::vector<QuestionSet>& sets,
                                                          const CategoryLexicon& lexicon,
                                                          const ConstructMapping& mapping) {
  std::map<GroupKey, ConstructScores> table;
  for (const auto& set : sets) {
    table[set.key] = construct_scores(category_rates(set, lexicon), mapping);
  }
  return table;
}

std::vector<ExpectationSpec> load_expectations(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    std::ifstream in(path);
    if (!in) raise(errc::missing_resource, "expectations file not found: " + path.string());
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::parse_error, path.string() + ": " + e.what());
  }
  if (!doc.is_array()) raise(errc::parse_error, path.string() + ": expected an array of expectation specs");

  std::vector<ExpectationSpec> specs;
  for (const auto& entry : doc) {
    ExpectationSpec spec;
    if (!entry.contains("dimension") || !entry.contains("higher") || !entry.contains("lower")) {
      raise(errc::parse_error, path.string() + ": spec needs dimension/higher/lower");
    }
    spec.dimension = entry["dimension"].get<std::string>();
    spec.higher = entry["higher"].get<std::vector<std::string>>();
    spec.lower = entry["lower"].get<std::vector<std::string>>();
    if (entry.contains("label")) spec.label = entry["label"].get<std::string>();
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Aligned: return "Aligned";
    case Verdict::NotAligned: return "NotAligned";
    case Verdict::Mixed: return "Mixed";
  }
  return "Mixed";
}

namespace {

bool is_region_name(const std::string& name) {
  return name == "Western" || name == "Eastern" || name == "LatinAmerican";
}

// Region names expand to every scored country of that region; explicit
// country names must be scored.
std::vector<std::string> expand_group(const std::vector<std::string>& names,
                                      const std::map<std::string, double>& scores, const RegionMap& regions,
                                      const std::string& dimension) {
  std::vector<std::string> countries;
  auto add = [&](const std::string& country) {
    if (std::find(countries.begin(), countries.end(), country) == countries.end()) countries.push_back(country);
  };
  for (const auto& name : names) {
    if (is_region_name(name)) {
      Region region = parse_region(name);
      for (const auto& [country, score] : scores) {
        (void)score;
        if (regions.supports(country) && regions.region_of(country) == region) add(country);
      }
    } else {
      if (!scores.count(name)) {
        raise(errc::missing_country, dimension + ": no score for country '" + name + "'");
      }
      add(name);
    }
  }
  if (countries.empty()) {
    raise(errc::missing_country, dimension + ": expectation group resolves to no scored countries");
  }
  std::sort(countries.begin(), countries.end());
  return countries;
}

}  // namespace

AlignmentVerdict classify_expectation(const std::map<std::string, double>& scores_by_country,
                                      const ExpectationSpec& spec, const RegionMap& regions, double theta) {
  AlignmentVerdict verdict;
  verdict.higher_countries = expand_group(spec.higher, scores_by_country, regions, spec.dimension);
  verdict.lower_countries = expand_group(spec.lower, scores_by_country, regions, spec.dimension);

  for (const auto& country : verdict.higher_countries) {
    if (std::find(verdict.lower_countries.begin(), verdict.lower_countries.end(), country) !=
        verdict.lower_countries.end()) {
      raise(errc::invalid_spec, spec.dimension + ": country '" + country + "' in both groups");
    }
  }

  double higher_sum = 0.0, lower_sum = 0.0;
  for (const auto& c : verdict.higher_countries) higher_sum += scores_by_country.at(c);
  for (const auto& c : verdict.lower_countries) lower_sum += scores_by_country.at(c);
  verdict.higher_mean = higher_sum / static_cast<double>(verdict.higher_countries.size());
  verdict.lower_mean = lower_sum / static_cast<double>(verdict.lower_countries.size());

  long dominant = 0;
  long pairs = 0;
  for (const auto& h : verdict.higher_countries) {
    for (const auto& l : verdict.lower_countries) {
      ++pairs;
      if (scores_by_country.at(h) > scores_by_country.at(l)) ++dominant;
    }
  }
  verdict.dominance_fraction = static_cast<double>(dominant) / static_cast<double>(pairs);

  constexpr double kEps = 1e-9;
  double scale = std::max({std::abs(verdict.higher_mean), std::abs(verdict.lower_mean), kEps});
  verdict.relative_margin = (verdict.higher_mean - verdict.lower_mean) / scale;

  if (verdict.dominance_fraction >= 0.75 && verdict.relative_margin >= theta) {
    verdict.verdict = Verdict::Aligned;
  } else if (verdict.dominance_fraction <= 0.25 && -verdict.relative_margin >= theta) {
    verdict.verdict = Verdict::NotAligned;
  } else {
    verdict.verdict = Verdict::Mixed;
  }
  return verdict;
}

}  // namespace cuest
