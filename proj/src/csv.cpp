#include "churneval/csv.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "churneval/errors.hpp"

namespace churneval::csv {

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

// One pass over the stream, splitting into records while honouring quoted
// fields. Line numbers are physical lines, 1-based, so quoted newlines keep
// error messages pointing at the record start.
std::vector<std::vector<std::string>> split_records(std::istream& in,
                                                    const std::string& context) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_field = [&]() {
    fields.push_back(field);
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&]() {
    end_field();
    records.push_back(std::move(fields));
    fields.clear();
    record_started = false;
  };

  char c;
  while (in.get(c)) {
    if (!record_started) {
      record_started = true;
      record_line = line;
    }
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          raise(ErrorCode::ParseError,
                context + ": stray quote in unquoted field at line " +
                    std::to_string(line));
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (in.peek() == '\n') in.get();
        ++line;
        end_record();
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) {
    raise(ErrorCode::ParseError,
          context + ": unterminated quoted field starting near line " +
              std::to_string(record_line));
  }
  if (record_started || !field.empty() || !fields.empty()) {
    end_record();
  }
  return records;
}

}  // namespace

Table parse(std::istream& in, const std::string& context) {
  auto records = split_records(in, context);
  if (records.empty()) {
    raise(ErrorCode::ParseError, context + ": no header row");
  }

  Table table;
  table.header = std::move(records.front());
  // Strip a UTF-8 BOM on the first header cell.
  if (!table.header.empty() && table.header[0].size() >= 3 &&
      table.header[0].compare(0, 3, "\xEF\xBB\xBF") == 0) {
    table.header[0].erase(0, 3);
  }

  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& rec = records[r];
    if (rec.size() == 1 && rec[0].empty()) continue;  // blank line
    if (rec.size() != table.header.size()) {
      raise(ErrorCode::ParseError,
            context + ": row " + std::to_string(r) + " has " +
                std::to_string(rec.size()) + " fields, header has " +
                std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(rec));
  }
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open " + path);
  }
  return parse(in, path);
}

std::string escape_field(const std::string& field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape_field(fields[i]);
  }
  out.push_back('\n');
  return out;
}

void write_file(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    raise(ErrorCode::IoError, "cannot write " + path);
  }
  out << join_row(table.header);
  for (const auto& row : table.rows) out << join_row(row);
  if (!out) {
    raise(ErrorCode::IoError, "write failed for " + path);
  }
}

}  // namespace churneval::csv
