#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cuest {

// Coarse tag alphabet; the ambiguity metric only tests |POS(w)| > 1.
enum class PosTag { Noun, Verb, Adj, Adv, Other };

std::optional<PosTag> parse_pos_tag(std::string_view tag);
std::string_view to_string(PosTag tag);

// All word resources the metric and augmentation layers consume.
// Entries are lowercase; immutable after load.
struct LexiconBundle {
  std::set<std::string> ambiguous_words;
  std::map<std::string, std::set<PosTag>> pos_dict;
  std::set<std::string> transitions;
  std::vector<std::string> metaphor_markers;  // may be multi-word phrases
  std::set<std::string> wh_words;
  std::set<std::string> stopwords;
  std::map<std::string, std::vector<std::string>> synonyms;

  bool operator==(const LexiconBundle&) const = default;
};

struct LexiconReport {
  std::map<std::string, std::size_t> counts;  // resource name -> entries kept
  std::vector<std::string> warnings;          // duplicates, non-fatal
};

// Loads ambiguous.txt, transitions.txt, stopwords.txt, whwords.txt,
// metaphor_markers.txt, pos_dict.tsv and synonyms.tsv from `dir`.
// Throws missing_resource / bad_tag; duplicates are deduplicated and reported.
LexiconBundle load_bundle(const std::filesystem::path& dir, LexiconReport* report = nullptr);

// Category lexicon: a pattern ending in '*' matches tokens by prefix,
// anything else matches exactly.
struct CategoryLexicon {
  std::string name;
  std::map<std::string, std::vector<std::string>> categories;

  bool operator==(const CategoryLexicon&) const = default;
};

bool pattern_matches(std::string_view pattern, std::string_view token);

// Accepts the conventional %-delimited dictionary format or a JSON object
// {category: [patterns]}. Throws parse_error / empty_category.
CategoryLexicon load_category_lexicon(const std::filesystem::path& path);

// Writes the %-delimited dictionary form; load(save(x)) == x.
void save_category_lexicon(const CategoryLexicon& lexicon, std::ostream& out);

}  // namespace cuest
