#pragma once

#include <stdexcept>
#include <string>

namespace cuest {

// One code per contract error named in the module interfaces.
enum class errc {
  // corpus
  malformed_record,
  unknown_topic,
  unknown_country,
  empty_corpus,
  mixed_countries,
  too_short,
  // lexicons
  missing_resource,
  bad_tag,
  parse_error,
  empty_category,
  // semantics
  remote_unavailable,
  empty_text,
  // metrics
  no_content_words,
  empty_set,
  all_skipped,
  // preference
  missing_topic,
  duplicate_topic,
  domain_mismatch,
  country_mismatch,
  // constructs
  empty_lexicon,
  unknown_category,
  missing_country,
  invalid_spec,
  // alignment
  list_mismatch,
  non_positive_sd,
  // annotation
  empty_records,
  no_overlap,
  // cli
  usage,
};

class error : public std::runtime_error {
 public:
  error(errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace cuest
