#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cuest {

// Maximal runs of ASCII letters, lowercased. "Don't" -> {don, t}.
std::vector<std::string> alpha_tokens(std::string_view text);

// Whitespace-separated tokens, kept verbatim (punctuation and case intact).
std::vector<std::string> space_tokens(std::string_view text);

std::string join(const std::vector<std::string>& tokens, char sep = ' ');
std::string lower(std::string_view s);
std::string trim(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);

// FNV-1a, 64-bit. Pinned: the builtin embedder's bucket assignment and the
// run-config hash both depend on it staying byte-stable.
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t fnv1a64(std::uint64_t seed, std::string_view s);

// SplitMix64. Pinned PRNG for the corpus augmenters: std:: distributions are
// implementation-defined, this is not.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  // Uniform in [0,1), 53-bit resolution.
  double next_double();
  // Uniform in [0, n). n must be > 0.
  std::size_t next_index(std::size_t n);

 private:
  std::uint64_t state_;
};

// Fixed 6-decimal formatting for every number that reaches an output file.
std::string format6(double x);
// The double nearest to format6(x); applied before values enter JSON reports.
double round6(double x);

// RFC-4180-ish CSV: quoted fields, doubled quotes, newlines inside quotes.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // False at end of input. Throws parse_error on an unterminated quote.
  bool next(std::vector<std::string>& row);
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

std::string csv_escape(std::string_view field);

std::string read_file(const std::string& path);

}  // namespace cuest
