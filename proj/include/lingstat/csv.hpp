#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lingstat::csv {

// A parsed comma-separated table. Row i of `rows` came from source line `lines[i]`.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;

  std::optional<std::size_t> column(std::string_view name) const;
};

// RFC-4180 style: comma separator, optional double quotes, LF or CRLF line ends.
// A leading UTF-8 BOM is skipped. Throws ValidationError on ragged rows.
Table parse(std::string_view text);
Table read_file(const std::string& path);

std::string read_text_file(const std::string& path);

// Quotes a field only when it contains a comma, quote or newline.
std::string escape(std::string_view field);
void write_row(std::ostream& os, const std::vector<std::string>& fields);

// Fixed-point with `decimals` digits; NaN prints as "NA". Negative zero prints as 0.
std::string number(double value, int decimals = 6);
// Shortest representation that round-trips exactly.
std::string exact(double value);

}  // namespace lingstat::csv
