#include "cuest/corpus.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

#include "cuest/errors.hpp"
#include "cuest/text.hpp"

namespace cuest {

const TopicCatalog& TopicCatalog::standard() {
  static const TopicCatalog catalog({
      "Family & Relationships",
      "Beauty and style",
      "Arts and humanities",
      "Education",
      "Computers and internet",
      "Business and finance",
      "Music and entertainment",
      "Society and culture",
      "Health and beauty",
      "Pets",
      "Games and Recreation",
      "News and Media",
      "Cars and Transportation",
      "Politics",
      "Trips",
      "Consumer Electronics",
  });
  return catalog;
}

TopicCatalog::TopicCatalog(std::vector<std::string> topics) : topics_(std::move(topics)) {
  for (std::size_t i = 0; i < topics_.size(); ++i) {
    for (std::size_t j = i + 1; j < topics_.size(); ++j) {
      if (topics_[i] == topics_[j]) raise(errc::duplicate_topic, "duplicate topic in catalog: " + topics_[i]);
    }
  }
}

bool TopicCatalog::contains(const std::string& topic) const {
  return std::find(topics_.begin(), topics_.end(), topic) != topics_.end();
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::Western: return "Western";
    case Region::Eastern: return "Eastern";
    case Region::LatinAmerican: return "LatinAmerican";
  }
  return "Western";
}

Region parse_region(std::string_view name) {
  if (name == "Western") return Region::Western;
  if (name == "Eastern") return Region::Eastern;
  if (name == "LatinAmerican") return Region::LatinAmerican;
  raise(errc::parse_error, "unknown region: " + std::string(name));
}

const RegionMap& RegionMap::standard() {
  static const RegionMap map(std::map<std::string, Region>{
      {"Argentina", Region::LatinAmerican},
      {"Australia", Region::Western},
      {"Brazil", Region::LatinAmerican},
      {"Canada", Region::Western},
      {"China", Region::Eastern},
      {"France", Region::Western},
      {"Germany", Region::Western},
      {"India", Region::Eastern},
      {"Indonesia", Region::Eastern},
      {"Italy", Region::Western},
      {"Mexico", Region::LatinAmerican},
      {"Philippines", Region::Eastern},
      {"Singapore", Region::Eastern},
      {"Taiwan", Region::Eastern},
      {"Thailand", Region::Eastern},
      {"UK", Region::Western},
      {"US", Region::Western},
      {"Vietnam", Region::Eastern},
  });
  return map;
}

RegionMap RegionMap::load(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    std::ifstream in(path);
    if (!in) raise(errc::missing_resource, "region map not found: " + path.string());
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::parse_error, path.string() + ": " + e.what());
  }
  if (!doc.is_object()) raise(errc::parse_error, path.string() + ": expected {country: region}");
  std::map<std::string, Region> entries;
  for (const auto& [country, region] : doc.items()) {
    if (!region.is_string()) raise(errc::parse_error, path.string() + ": region for " + country + " is not a string");
    entries[country] = parse_region(region.get<std::string>());
  }
  return RegionMap(std::move(entries));
}

RegionMap::RegionMap(std::map<std::string, Region> entries) : entries_(std::move(entries)) {}

Region RegionMap::region_of(const std::string& country) const {
  auto it = entries_.find(country);
  if (it == entries_.end()) raise(errc::unknown_country, "unknown country: " + country);
  return it->second;
}

bool RegionMap::supports(const std::string& country) const { return entries_.count(country) > 0; }

CorpusFormat infer_corpus_format(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? CorpusFormat::Csv : CorpusFormat::Jsonl;
}

namespace {

struct RawRecord {
  std::size_t line = 0;
  bool ok = false;
  std::string error;
  Question question;
};

void read_jsonl(const std::filesystem::path& path, std::vector<RawRecord>& records) {
  std::ifstream in(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    RawRecord record;
    record.line = lineno;
    try {
      auto doc = nlohmann::json::parse(line);
      for (const char* field : {"id", "country", "topic", "source", "text"}) {
        if (!doc.contains(field) || !doc[field].is_string()) {
          throw error(errc::malformed_record, std::string("missing or non-string field '") + field + "'");
        }
      }
      record.question = Question{doc["id"], doc["country"], doc["topic"], doc["source"], doc["text"]};
      record.ok = true;
    } catch (const std::exception& e) {
      record.error = e.what();
    }
    records.push_back(std::move(record));
  }
}

void read_csv_corpus(const std::filesystem::path& path, std::vector<RawRecord>& records) {
  std::ifstream in(path);
  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) return;
  std::map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < row.size(); ++i) columns[lower(trim(row[i]))] = i;
  for (const char* field : {"id", "country", "topic", "source", "text"}) {
    if (!columns.count(field)) {
      raise(errc::malformed_record, path.string() + ": header must contain id,country,topic,source,text");
    }
  }
  std::size_t last_needed = 0;
  for (const char* field : {"id", "country", "topic", "source", "text"}) {
    last_needed = std::max(last_needed, columns[field]);
  }
  while (reader.next(row)) {
    RawRecord record;
    record.line = reader.line();
    if (row.size() <= last_needed) {
      record.error = "short row";
    } else {
      record.question = Question{row[columns["id"]], row[columns["country"]], row[columns["topic"]],
                                 row[columns["source"]], row[columns["text"]]};
      record.ok = true;
    }
    records.push_back(std::move(record));
  }
}

}  // namespace

std::vector<QuestionSet> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                                     const TopicCatalog& topics, const RegionMap& regions, LoadReport* report) {
  if (!std::filesystem::exists(path)) raise(errc::missing_resource, "corpus file not found: " + path.string());

  std::vector<RawRecord> records;
  if (format == CorpusFormat::Jsonl) {
    read_jsonl(path, records);
  } else {
    read_csv_corpus(path, records);
  }

  LoadReport local;
  LoadReport& rep = report ? *report : local;
  rep.total_records += records.size();

  // Grouping is stable: first-seen key order, input order within groups.
  std::vector<QuestionSet> sets;
  std::map<GroupKey, std::size_t> index;
  auto reject = [&](const RawRecord& r, std::size_t& counter, const std::string& why) {
    ++counter;
    rep.messages.push_back(path.filename().string() + ":" + std::to_string(r.line) + ": " + why);
  };

  for (const auto& record : records) {
    if (!record.ok) {
      reject(record, rep.malformed, "malformed record: " + record.error);
      continue;
    }
    const Question& q = record.question;
    if (trim(q.text).empty()) {
      reject(record, rep.malformed, "empty text");
      continue;
    }
    if (!topics.contains(q.topic)) {
      reject(record, rep.unknown_topic, "unknown topic '" + q.topic + "'");
      continue;
    }
    if (!regions.supports(q.country)) {
      reject(record, rep.unknown_country, "unknown country '" + q.country + "'");
      continue;
    }
    GroupKey key{q.country, q.source};
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, sets.size()).first;
      sets.push_back(QuestionSet{key, {}});
    }
    sets[it->second].questions.push_back(q);
    ++rep.valid_records;
  }

  if (rep.valid_records == 0) raise(errc::empty_corpus, "no valid records in " + path.string());
  return sets;
}

std::map<std::string, long> topic_frequencies(const std::vector<QuestionSet>& sets, const TopicCatalog& topics) {
  std::map<std::string, long> freqs;
  for (const auto& topic : topics.topics()) freqs[topic] = 0;

  const std::string* country = nullptr;
  for (const auto& set : sets) {
    if (country && set.key.country != *country) {
      raise(errc::mixed_countries, "topic_frequencies saw countries " + *country + " and " + set.key.country);
    }
    country = &set.key.country;
    for (const auto& q : set.questions) ++freqs[q.topic];
  }
  return freqs;
}

Question augment_synonym(const Question& q, const std::map<std::string, std::vector<std::string>>& synonyms,
                         double rate, std::uint64_t seed) {
  if (rate < 0.0 || rate > 1.0) raise(errc::invalid_spec, "synonym rate must be in [0,1]");
  Question out = q;
  if (rate == 0.0 || synonyms.empty()) return out;

  std::vector<std::string> tokens = space_tokens(q.text);
  SplitMix64 rng(seed);
  for (auto& token : tokens) {
    auto it = synonyms.find(lower(token));
    if (it == synonyms.end() || it->second.empty()) continue;
    if (rng.next_double() < rate) {
      token = it->second[rng.next_index(it->second.size())];
    }
  }
  out.text = join(tokens);
  return out;
}

Question augment_swap(const Question& q, int swaps, std::uint64_t seed) {
  Question out = q;
  if (swaps == 0) return out;

  std::vector<std::string> tokens = space_tokens(q.text);
  if (tokens.size() < 2) raise(errc::too_short, "augment_swap needs at least 2 tokens");

  SplitMix64 rng(seed);
  for (int i = 0; i < swaps; ++i) {
    std::size_t pos = rng.next_index(tokens.size() - 1);
    std::swap(tokens[pos], tokens[pos + 1]);
  }
  out.text = join(tokens);
  return out;
}

}  // namespace cuest
