#include "cuest/lexicons.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "cuest/errors.hpp"
#include "cuest/text.hpp"

namespace cuest {

namespace {

// Word-list lines: one entry per line, '#' starts a comment.
std::vector<std::string> read_list_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string entry = trim(line);
    if (!entry.empty()) lines.push_back(lower(entry));
  }
  return lines;
}

std::filesystem::path require_file(const std::filesystem::path& dir, const std::string& name,
                                   const std::string& resource) {
  auto path = dir / name;
  if (!std::filesystem::exists(path)) {
    raise(errc::missing_resource, "missing lexicon resource '" + resource + "' (" + path.string() + ")");
  }
  return path;
}

template <typename Insert>
void load_word_set(const std::filesystem::path& dir, const std::string& file, const std::string& resource,
                   LexiconReport* report, Insert insert) {
  auto entries = read_list_lines(require_file(dir, file, resource));
  std::size_t kept = 0;
  for (auto& entry : entries) {
    if (insert(entry)) {
      ++kept;
    } else if (report) {
      report->warnings.push_back(resource + ": duplicate entry '" + entry + "'");
    }
  }
  if (report) report->counts[resource] = kept;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(trim(current));
  return parts;
}

}  // namespace

std::optional<PosTag> parse_pos_tag(std::string_view tag) {
  if (tag == "NOUN") return PosTag::Noun;
  if (tag == "VERB") return PosTag::Verb;
  if (tag == "ADJ") return PosTag::Adj;
  if (tag == "ADV") return PosTag::Adv;
  if (tag == "OTHER") return PosTag::Other;
  return std::nullopt;
}

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::Noun: return "NOUN";
    case PosTag::Verb: return "VERB";
    case PosTag::Adj: return "ADJ";
    case PosTag::Adv: return "ADV";
    case PosTag::Other: return "OTHER";
  }
  return "OTHER";
}

LexiconBundle load_bundle(const std::filesystem::path& dir, LexiconReport* report) {
  LexiconBundle bundle;

  load_word_set(dir, "ambiguous.txt", "ambiguous", report,
                [&](const std::string& w) { return bundle.ambiguous_words.insert(w).second; });
  load_word_set(dir, "transitions.txt", "transitions", report,
                [&](const std::string& w) { return bundle.transitions.insert(w).second; });
  load_word_set(dir, "stopwords.txt", "stopwords", report,
                [&](const std::string& w) { return bundle.stopwords.insert(w).second; });
  load_word_set(dir, "whwords.txt", "whwords", report,
                [&](const std::string& w) { return bundle.wh_words.insert(w).second; });
  load_word_set(dir, "metaphor_markers.txt", "metaphor_markers", report, [&](const std::string& phrase) {
    if (std::find(bundle.metaphor_markers.begin(), bundle.metaphor_markers.end(), phrase) !=
        bundle.metaphor_markers.end()) {
      return false;
    }
    bundle.metaphor_markers.push_back(phrase);
    return true;
  });

  // pos_dict.tsv: word<TAB>TAG[,TAG...]
  {
    auto path = require_file(dir, "pos_dict.tsv", "pos_dict");
    std::ifstream in(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      if (trim(line).empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        raise(errc::parse_error, "pos_dict.tsv:" + std::to_string(lineno) + ": expected word<TAB>tags");
      }
      std::string word = lower(trim(line.substr(0, tab)));
      auto& tags = bundle.pos_dict[word];
      if (!tags.empty() && report) {
        report->warnings.push_back("pos_dict: duplicate entry '" + word + "' (tags merged)");
      }
      for (const auto& tag_text : split_on(line.substr(tab + 1), ',')) {
        auto tag = parse_pos_tag(tag_text);
        if (!tag) {
          raise(errc::bad_tag,
                "pos_dict.tsv:" + std::to_string(lineno) + ": tag '" + tag_text + "' outside {NOUN,VERB,ADJ,ADV,OTHER}");
        }
        tags.insert(*tag);
      }
    }
    if (report) report->counts["pos_dict"] = bundle.pos_dict.size();
  }

  // synonyms.tsv: word<TAB>syn1,syn2,...
  {
    auto path = require_file(dir, "synonyms.tsv", "synonyms");
    std::ifstream in(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      if (trim(line).empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        raise(errc::parse_error, "synonyms.tsv:" + std::to_string(lineno) + ": expected word<TAB>synonyms");
      }
      std::string word = lower(trim(line.substr(0, tab)));
      if (bundle.synonyms.count(word) && report) {
        report->warnings.push_back("synonyms: duplicate entry '" + word + "' (last wins)");
      }
      std::vector<std::string> syns;
      for (const auto& part : split_on(lower(line.substr(tab + 1)), ',')) {
        if (part.empty()) continue;
        // replacements are single tokens; the augmenter preserves token count
        if (part.find(' ') != std::string::npos || part.find('\t') != std::string::npos) {
          raise(errc::parse_error,
                "synonyms.tsv:" + std::to_string(lineno) + ": synonym '" + part + "' is not a single token");
        }
        if (std::find(syns.begin(), syns.end(), part) == syns.end()) syns.push_back(part);
      }
      if (syns.empty()) {
        raise(errc::parse_error, "synonyms.tsv:" + std::to_string(lineno) + ": no synonyms for '" + word + "'");
      }
      bundle.synonyms[word] = std::move(syns);
    }
    if (report) report->counts["synonyms"] = bundle.synonyms.size();
  }

  return bundle;
}

bool pattern_matches(std::string_view pattern, std::string_view token) {
  if (!pattern.empty() && pattern.back() == '*') {
    return starts_with(token, pattern.substr(0, pattern.size() - 1));
  }
  return token == pattern;
}

namespace {

CategoryLexicon parse_dic(const std::filesystem::path& path) {
  std::ifstream in(path);
  CategoryLexicon lexicon;
  lexicon.name = path.stem().string();

  std::string line;
  std::size_t lineno = 0;
  int percent_seen = 0;
  std::map<std::string, std::string> id_to_category;
  while (std::getline(in, line)) {
    ++lineno;
    std::string text = trim(line);
    if (text.empty()) continue;
    if (text == "%") {
      ++percent_seen;
      continue;
    }
    if (percent_seen == 1) {
      // header: id<TAB or spaces>category-name
      std::istringstream fields(text);
      std::string id, name;
      fields >> id >> name;
      if (id.empty() || name.empty()) {
        raise(errc::parse_error, path.string() + ":" + std::to_string(lineno) + ": expected 'id name'");
      }
      if (!id_to_category.emplace(id, lower(name)).second) {
        raise(errc::parse_error, path.string() + ":" + std::to_string(lineno) + ": duplicate category id " + id);
      }
      lexicon.categories[lower(name)];  // keep declared categories even if empty in body
    } else if (percent_seen >= 2) {
      // body: word<TAB>id[,id...]
      std::istringstream fields(text);
      std::string word;
      fields >> word;
      word = lower(word);
      std::string rest;
      std::getline(fields, rest);
      bool any = false;
      for (const auto& id : split_on(rest, ',')) {
        std::istringstream id_fields(id);
        std::string one;
        while (id_fields >> one) {
          auto it = id_to_category.find(one);
          if (it == id_to_category.end()) {
            raise(errc::parse_error, path.string() + ":" + std::to_string(lineno) + ": unknown category id " + one);
          }
          auto& patterns = lexicon.categories[it->second];
          if (std::find(patterns.begin(), patterns.end(), word) == patterns.end()) patterns.push_back(word);
          any = true;
        }
      }
      if (!any) {
        raise(errc::parse_error, path.string() + ":" + std::to_string(lineno) + ": entry '" + word + "' has no category");
      }
    } else {
      raise(errc::parse_error, path.string() + ":" + std::to_string(lineno) + ": content before '%' header");
    }
  }
  return lexicon;
}

CategoryLexicon parse_json_lexicon(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    std::ifstream in(path);
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::parse_error, path.string() + ": " + e.what());
  }
  if (!doc.is_object()) raise(errc::parse_error, path.string() + ": expected an object of {category: [patterns]}");
  CategoryLexicon lexicon;
  lexicon.name = path.stem().string();
  for (const auto& [category, patterns] : doc.items()) {
    if (!patterns.is_array()) raise(errc::parse_error, path.string() + ": category '" + category + "' is not an array");
    auto& out = lexicon.categories[lower(category)];
    for (const auto& p : patterns) {
      if (!p.is_string()) raise(errc::parse_error, path.string() + ": non-string pattern in '" + category + "'");
      std::string pattern = lower(trim(p.get<std::string>()));
      if (pattern.empty()) raise(errc::parse_error, path.string() + ": empty pattern in '" + category + "'");
      if (std::find(out.begin(), out.end(), pattern) == out.end()) out.push_back(pattern);
    }
  }
  return lexicon;
}

}  // namespace

CategoryLexicon load_category_lexicon(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) raise(errc::missing_resource, "category lexicon not found: " + path.string());
  CategoryLexicon lexicon =
      path.extension() == ".json" ? parse_json_lexicon(path) : parse_dic(path);

  if (lexicon.categories.empty()) raise(errc::empty_category, "category lexicon is empty: " + path.string());
  for (const auto& [category, patterns] : lexicon.categories) {
    if (patterns.empty()) raise(errc::empty_category, "category '" + category + "' has no patterns");
    for (const auto& p : patterns) {
      if (p.empty() || p == "*") raise(errc::parse_error, "category '" + category + "' has an empty pattern");
    }
  }
  return lexicon;
}

void save_category_lexicon(const CategoryLexicon& lexicon, std::ostream& out) {
  out << "%\n";
  std::size_t id = 0;
  std::map<std::string, std::size_t> ids;
  for (const auto& [category, patterns] : lexicon.categories) {
    ids[category] = ++id;
    out << id << "\t" << category << "\n";
  }
  out << "%\n";
  // One line per (pattern, category); patterns keep their per-category order.
  for (const auto& [category, patterns] : lexicon.categories) {
    for (const auto& pattern : patterns) {
      out << pattern << "\t" << ids[category] << "\n";
    }
  }
}

}  // namespace cuest
