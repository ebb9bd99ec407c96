#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace patentmap::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the row starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields may hold commas, quotes ("") and newlines.
/// Accepts LF and CRLF line endings and a leading UTF-8 BOM. Blank lines are
/// skipped. Throws patentmap::Error on an unterminated quote.
std::vector<Row> parse(std::string_view text);

/// Quotes a field only when it needs it.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace patentmap::csv
