#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cuest/corpus.hpp"
#include "cuest/lexicons.hpp"

namespace cuest {

// The seven construct dimensions, fixed order. Higher score leans toward the
// first-named pole (IC = individualism, UA = avoidance, ..., RH = rote).
inline constexpr std::array<std::string_view, 7> kConstructDimensions = {
    "IC", "UA", "IR", "LSO", "OC", "HC", "RH"};

using CategoryRates = std::map<std::string, double>;

// matched tokens / total tokens over the set's pooled text, per category.
CategoryRates category_rates(const QuestionSet& set, const CategoryLexicon& lexicon);

// dimension -> {category -> signed weight}
using ConstructMapping = std::map<std::string, std::map<std::string, double>>;

ConstructMapping load_construct_mapping(const std::filesystem::path& path);

struct ConstructScores {
  std::map<std::string, double> values;  // keyed by dimension
};

// Linear: score(dim) = sum of weight * rate. Throws unknown_category when the
// mapping references a category absent from the rates.
ConstructScores construct_scores(const CategoryRates& rates, const ConstructMapping& mapping);

// One ConstructScores per (country, source), deterministic key order.
std::map<GroupKey, ConstructScores> group_construct_table(const std::vector<QuestionSet>& sets,
                                                          const CategoryLexicon& lexicon,
                                                          const ConstructMapping& mapping);

// One traditional expectation: groups may name countries or regions.
struct ExpectationSpec {
  std::string dimension;
  std::vector<std::string> higher;
  std::vector<std::string> lower;
  std::string label;
};

std::vector<ExpectationSpec> load_expectations(const std::filesystem::path& path);

enum class Verdict { Aligned, NotAligned, Mixed };

std::string_view to_string(Verdict verdict);

struct AlignmentVerdict {
  Verdict verdict = Verdict::Mixed;
  double higher_mean = 0.0;
  double lower_mean = 0.0;
  double dominance_fraction = 0.0;  // cross pairs with score(higher) > score(lower)
  double relative_margin = 0.0;     // (H - L) / max(|H|, |L|, eps)
  std::vector<std::string> higher_countries;
  std::vector<std::string> lower_countries;
};

// Pairwise-dominance rule: Aligned when f >= 0.75 and the relative margin
// reaches theta; NotAligned on the mirrored condition; Mixed otherwise.
AlignmentVerdict classify_expectation(const std::map<std::string, double>& scores_by_country,
                                      const ExpectationSpec& spec, const RegionMap& regions,
                                      double theta = 0.05);

}  // namespace cuest
