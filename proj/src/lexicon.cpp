#include "lingstat/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "lingstat/csv.hpp"
#include "lingstat/keyvalue.hpp"

namespace lingstat::lexicon {

Lexicon::Lexicon(std::vector<Category> categories, std::vector<Entry> entries)
    : categories_(std::move(categories)), entries_(std::move(entries)) {
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (!slot.emplace(categories_[i].id, i).second) {
      throw std::invalid_argument("duplicate category id " + std::to_string(categories_[i].id));
    }
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.pattern, a.prefix_wildcard) < std::tie(b.pattern, b.prefix_wildcard);
  });
  for (auto& e : entries_) {
    if (e.pattern.empty()) throw std::invalid_argument("empty lexicon pattern");
    if (e.category_ids.empty()) throw std::invalid_argument("entry '" + e.pattern + "' has no category");
    std::sort(e.category_ids.begin(), e.category_ids.end());
    e.category_ids.erase(std::unique(e.category_ids.begin(), e.category_ids.end()), e.category_ids.end());
    std::vector<std::size_t> slots;
    for (int id : e.category_ids) {
      const auto it = slot.find(id);
      if (it == slot.end()) {
        throw std::invalid_argument("entry '" + e.pattern + "' references unknown category " + std::to_string(id));
      }
      slots.push_back(it->second);
    }
    std::sort(slots.begin(), slots.end());
    auto& table = e.prefix_wildcard ? prefix_ : exact_;
    if (!table.emplace(e.pattern, std::move(slots)).second) {
      throw std::invalid_argument("duplicate pattern '" + e.pattern + (e.prefix_wildcard ? "*'" : "'"));
    }
    if (e.prefix_wildcard) max_prefix_ = std::max(max_prefix_, e.pattern.size());
  }
}

const std::vector<std::size_t>* Lexicon::match(std::string_view token) const {
  if (token.empty()) return nullptr;
  // Numerals count as words but never match.
  if (std::any_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return nullptr;
  }
  const std::string key(token);
  if (const auto it = exact_.find(key); it != exact_.end()) return &it->second;
  for (std::size_t len = std::min(max_prefix_, key.size()); len > 0; --len) {
    if (const auto it = prefix_.find(key.substr(0, len)); it != prefix_.end()) return &it->second;
  }
  return nullptr;
}

namespace {

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_int(std::string_view s, int& out) {
  const auto t = trim(s);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size() && !t.empty();
}

}  // namespace

Lexicon compile(std::string_view source) {
  enum class Section { preamble, categories, entries } section = Section::preamble;
  std::vector<Category> categories;
  std::vector<Entry> entries;
  std::set<int> ids;
  std::set<std::pair<std::string, bool>> seen;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < source.size()) {
    auto end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    auto line = source.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;

    if (trim(line) == "%") {
      if (section == Section::preamble) {
        section = Section::categories;
      } else if (section == Section::categories) {
        section = Section::entries;
      } else {
        throw LexiconError("unexpected third '%' separator", line_no);
      }
      continue;
    }
    const auto fields = split_tabs(line);
    switch (section) {
      case Section::preamble:
        throw LexiconError("expected '%' before category definitions", line_no);
      case Section::categories: {
        int id = 0;
        if (fields.size() != 2 || !parse_int(fields[0], id) || trim(fields[1]).empty()) {
          throw LexiconError("expected '<id><TAB><name>'", line_no);
        }
        if (!ids.insert(id).second) throw LexiconError("duplicate category id " + std::to_string(id), line_no);
        categories.push_back({id, trim(fields[1])});
        break;
      }
      case Section::entries: {
        if (fields.size() < 2) throw LexiconError("expected '<pattern><TAB><id>...'", line_no);
        Entry e;
        std::string pattern = trim(fields[0]);
        std::transform(pattern.begin(), pattern.end(), pattern.begin(), [](unsigned char c) {
          return static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c);
        });
        if (!pattern.empty() && pattern.back() == '*') {
          e.prefix_wildcard = true;
          pattern.pop_back();
        }
        if (pattern.empty()) throw LexiconError("empty pattern", line_no);
        e.pattern = pattern;
        for (std::size_t i = 1; i < fields.size(); ++i) {
          if (trim(fields[i]).empty()) continue;
          int id = 0;
          if (!parse_int(fields[i], id)) throw LexiconError("bad category id '" + fields[i] + "'", line_no);
          if (!ids.contains(id)) throw LexiconError("unknown category id " + std::to_string(id), line_no);
          e.category_ids.push_back(id);
        }
        if (e.category_ids.empty()) throw LexiconError("entry without category", line_no);
        if (!seen.emplace(e.pattern, e.prefix_wildcard).second) {
          throw LexiconError("duplicate pattern '" + trim(fields[0]) + "'", line_no);
        }
        entries.push_back(std::move(e));
        break;
      }
    }
  }
  if (section != Section::entries) throw LexiconError("missing '%' section separators", line_no);
  return Lexicon(std::move(categories), std::move(entries));
}

Lexicon compile_file(const std::string& path) { return compile(csv::read_text_file(path)); }

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

Tokens tokenize(std::string_view text) {
  // Fold the right single quotation mark to an ASCII apostrophe first.
  std::string s;
  s.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.compare(i, 3, "\xE2\x80\x99") == 0) {
      s.push_back('\'');
      i += 2;
    } else {
      s.push_back(text[i]);
    }
  }

  Tokens out;
  std::size_t words_in_sentence = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (is_word_byte(c)) {
      std::string token;
      while (i < s.size()) {
        const auto d = static_cast<unsigned char>(s[i]);
        if (is_word_byte(d)) {
          token.push_back(static_cast<char>(d >= 'A' && d <= 'Z' ? d + 32 : d));
          ++i;
        } else if (d == '\'' && i + 1 < s.size() && is_word_byte(static_cast<unsigned char>(s[i + 1]))) {
          token.push_back('\'');
          ++i;
        } else {
          break;
        }
      }
      out.words.push_back(std::move(token));
      ++words_in_sentence;
      continue;
    }
    if (c == '.' || c == '!' || c == '?') {
      const bool boundary = i + 1 == s.size() || s[i + 1] == ' ' || s[i + 1] == '\t' ||
                            s[i + 1] == '\n' || s[i + 1] == '\r';
      if (boundary && words_in_sentence > 0) {
        ++out.sentences;
        words_in_sentence = 0;
      }
    }
    ++i;
  }
  if (words_in_sentence > 0) ++out.sentences;
  return out;
}

ExtractionResult extract(std::string_view text, const Lexicon& lex) {
  const auto tokens = tokenize(text);
  ExtractionResult r;
  r.category_percent.assign(lex.categories().size(), 0.0);
  r.word_count = tokens.words.size();
  if (r.word_count == 0) return r;

  std::vector<std::size_t> counts(lex.categories().size(), 0);
  std::size_t matched = 0;
  for (const auto& w : tokens.words) {
    if (const auto* slots = lex.match(w)) {
      ++matched;
      for (auto s : *slots) ++counts[s];
    }
  }
  const double n = static_cast<double>(r.word_count);
  r.words_per_sentence = n / static_cast<double>(tokens.sentences);
  r.dictionary_coverage = 100.0 * static_cast<double>(matched) / n;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    r.category_percent[c] = 100.0 * static_cast<double>(counts[c]) / n;
  }
  return r;
}

}  // namespace lingstat::lexicon
