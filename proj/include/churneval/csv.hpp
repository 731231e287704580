#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace churneval::csv {

// In-memory comma-separated table: first row is the header, fields are
// unescaped strings. Quoting follows RFC 4180 (double quotes, "" escape,
// embedded commas/newlines allowed).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, -1 when absent.
  int column(const std::string& name) const;
};

// Parses a whole stream. `context` names the source (file path) for error
// messages. Throws Error(ParseError) on malformed quoting or ragged rows.
Table parse(std::istream& in, const std::string& context);

Table read_file(const std::string& path);

std::string escape_field(const std::string& field);
std::string join_row(const std::vector<std::string>& fields);

void write_file(const std::string& path, const Table& table);

}  // namespace churneval::csv
