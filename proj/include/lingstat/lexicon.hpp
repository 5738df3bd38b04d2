#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lingstat::lexicon {

struct Category {
  int id = 0;
  std::string name;
};

struct Entry {
  std::string pattern;  // lowercase, without the trailing '*'
  bool prefix_wildcard = false;
  std::vector<int> category_ids;  // sorted, non-empty
};

class LexiconError : public std::runtime_error {
 public:
  LexiconError(const std::string& what, std::size_t line)
      : std::runtime_error("lexicon line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Compiled word-count dictionary. Exact entries shadow wildcard entries; among
// wildcards the longest matching prefix wins.
class Lexicon {
 public:
  Lexicon(std::vector<Category> categories, std::vector<Entry> entries);

  const std::vector<Category>& categories() const { return categories_; }
  // Entries sorted by (pattern, wildcard).
  const std::vector<Entry>& entries() const { return entries_; }

  // Category slots (indices into categories()) of the winning entry for a
  // lowercased token, or nullptr when nothing matches.
  const std::vector<std::size_t>* match(std::string_view token) const;

 private:
  std::vector<Category> categories_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> exact_;
  std::unordered_map<std::string, std::vector<std::size_t>> prefix_;
  std::size_t max_prefix_ = 0;
};

// Parses the lexicon text format:
//   %
//   <id>\t<name>          one per category
//   %
//   <pattern>\t<id>[\t<id>...]   '*' suffix marks a prefix wildcard
// Lines starting with '#' are comments; blank lines are ignored.
Lexicon compile(std::string_view source);
Lexicon compile_file(const std::string& path);

struct Tokens {
  std::vector<std::string> words;
  std::size_t sentences = 0;
};

// Lowercased tokens: maximal runs of letters/digits with internal apostrophes.
// Non-ASCII UTF-8 sequences count as letters; U+2019 is folded to '\''.
Tokens tokenize(std::string_view text);

struct ExtractionResult {
  std::size_t word_count = 0;
  double words_per_sentence = 0;
  double dictionary_coverage = 0;
  std::vector<double> category_percent;  // aligned with Lexicon::categories()
};

ExtractionResult extract(std::string_view text, const Lexicon& lex);

}  // namespace lingstat::lexicon
