#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace chainfair {

/// Shortest decimal text that parses back to exactly v.
std::string format_double(double v);

/// Comma-separated table with a mandatory header row. No quoting: fields
/// never contain commas in this project's formats.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by header name; throws ParseError if absent.
  std::size_t column(const std::string& name) const;
  /// Field parsed as a double; throws ParseError on malformed text.
  double number(std::size_t row, std::size_t col) const;
};

/// Parses a table. Blank lines and a trailing '\r' are ignored; every row
/// must have as many fields as the header.
CsvTable read_csv(std::istream& in);

void write_csv(std::ostream& out, const CsvTable& table);

}  // namespace chainfair
