#include "cuest/annotation.hpp"

#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "cuest/errors.hpp"
#include "cuest/text.hpp"

namespace cuest {

namespace {

bool parse_bool01(const std::string& field, std::size_t line) {
  std::string v = trim(field);
  if (v == "0") return false;
  if (v == "1") return true;
  raise(errc::malformed_record, "line " + std::to_string(line) + ": expected 0 or 1, got '" + field + "'");
}

using ResponseKey = std::tuple<std::string, std::string, int>;  // statement, model, response

bool field_value(const AnnotationRecord& r, AnnotationField field) {
  return field == AnnotationField::HasQuestion ? r.has_question : r.relevant;
}

double combined_rate(const std::vector<AnnotationRecord>& records, AnnotationField field, TiePolicy tie) {
  if (records.empty()) raise(errc::empty_records, "no annotation records");

  std::map<ResponseKey, std::pair<long, long>> votes;  // key -> (true, false)
  for (const auto& r : records) {
    auto& [yes, no] = votes[ResponseKey{r.statement_id, r.model_id, r.response_index}];
    (field_value(r, field) ? yes : no) += 1;
  }

  long positive = 0;
  for (const auto& [key, vote] : votes) {
    const auto& [yes, no] = vote;
    bool combined = yes != no ? yes > no : tie == TiePolicy::Positive;
    if (combined) ++positive;
  }
  return static_cast<double>(positive) / static_cast<double>(votes.size());
}

}  // namespace

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(errc::missing_resource, "annotation file not found: " + path.string());

  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) raise(errc::empty_records, path.string() + ": empty file");

  std::map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < row.size(); ++i) columns[lower(trim(row[i]))] = i;
  for (const char* field :
       {"statement_id", "model_id", "response_index", "annotator_id", "has_question", "relevant"}) {
    if (!columns.count(field)) {
      raise(errc::malformed_record, path.string() + ": header must contain " + std::string(field));
    }
  }

  std::vector<AnnotationRecord> records;
  std::set<std::tuple<std::string, std::string, int, std::string>> seen;
  while (reader.next(row)) {
    if (row.size() < columns.size()) {
      raise(errc::malformed_record, path.string() + ":" + std::to_string(reader.line()) + ": short row");
    }
    AnnotationRecord r;
    r.statement_id = trim(row[columns["statement_id"]]);
    r.model_id = trim(row[columns["model_id"]]);
    try {
      r.response_index = std::stoi(trim(row[columns["response_index"]]));
    } catch (const std::exception&) {
      raise(errc::malformed_record, path.string() + ":" + std::to_string(reader.line()) + ": bad response_index");
    }
    r.annotator_id = trim(row[columns["annotator_id"]]);
    r.has_question = parse_bool01(row[columns["has_question"]], reader.line());
    r.relevant = parse_bool01(row[columns["relevant"]], reader.line());
    if (!seen.insert({r.statement_id, r.model_id, r.response_index, r.annotator_id}).second) {
      raise(errc::malformed_record,
            path.string() + ":" + std::to_string(reader.line()) + ": duplicate annotation key");
    }
    records.push_back(std::move(r));
  }
  return records;
}

double curiosity_rate(const std::vector<AnnotationRecord>& records, TiePolicy tie) {
  return combined_rate(records, AnnotationField::HasQuestion, tie);
}

double relevance_rate(const std::vector<AnnotationRecord>& records, TiePolicy tie) {
  return combined_rate(records, AnnotationField::Relevant, tie);
}

double percent_agreement(const std::vector<AnnotationRecord>& records, AnnotationField field) {
  // annotator -> (response key -> label)
  std::map<std::string, std::map<ResponseKey, bool>> by_annotator;
  for (const auto& r : records) {
    by_annotator[r.annotator_id][ResponseKey{r.statement_id, r.model_id, r.response_index}] = field_value(r, field);
  }

  std::vector<std::string> annotators;
  for (const auto& [name, labels] : by_annotator) annotators.push_back(name);

  double pair_sum = 0.0;
  std::size_t pairs_with_overlap = 0;
  for (std::size_t i = 0; i < annotators.size(); ++i) {
    for (std::size_t j = i + 1; j < annotators.size(); ++j) {
      const auto& a = by_annotator[annotators[i]];
      const auto& b = by_annotator[annotators[j]];
      long shared = 0, equal = 0;
      for (const auto& [key, label] : a) {
        auto it = b.find(key);
        if (it == b.end()) continue;
        ++shared;
        if (it->second == label) ++equal;
      }
      if (shared > 0) {
        pair_sum += static_cast<double>(equal) / static_cast<double>(shared);
        ++pairs_with_overlap;
      }
    }
  }
  if (pairs_with_overlap == 0) {
    raise(errc::no_overlap, "no two annotators share an annotated response");
  }
  return 100.0 * pair_sum / static_cast<double>(pairs_with_overlap);
}

}  // namespace cuest
