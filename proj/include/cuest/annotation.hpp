#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cuest {

struct AnnotationRecord {
  std::string statement_id;
  std::string model_id;
  int response_index = 0;
  std::string annotator_id;
  bool has_question = false;
  bool relevant = false;
};

// CSV with header statement_id,model_id,response_index,annotator_id,
// has_question,relevant; boolean fields are 0/1. A repeated
// (statement, model, response, annotator) key is malformed.
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path);

enum class TiePolicy { Positive, Negative };

enum class AnnotationField { HasQuestion, Relevant };

// Majority vote per (statement, model, response); ties resolved by policy.
// Fraction of responses whose combined has_question label is true.
double curiosity_rate(const std::vector<AnnotationRecord>& records, TiePolicy tie = TiePolicy::Positive);

// Same combination rule over the relevance label.
double relevance_rate(const std::vector<AnnotationRecord>& records, TiePolicy tie = TiePolicy::Positive);

// Over all co-annotated responses: share with identical labels, x100.
// Averaged over annotator pairs when more than two annotators share items.
double percent_agreement(const std::vector<AnnotationRecord>& records, AnnotationField field);

}  // namespace cuest
