#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lingstat {

// Flat key=value configuration. '#' starts a comment line; whitespace around
// keys and values is trimmed. Later duplicates override earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig read_file(const std::string& path);

  bool has(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  // Throws ConfigError naming the key when absent.
  const std::string& require(std::string_view key) const;
  void set(std::string key, std::string value);

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// Splits "a, b ,c" into {"a","b","c"}; empty input gives an empty list.
std::vector<std::string> split_list(std::string_view text, char sep = ',');
std::string trim(std::string_view s);

}  // namespace lingstat
