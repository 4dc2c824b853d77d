/*
 * Copyright 2026 The depprof Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "depprof/errors.hpp"
#include "depprof/relation.hpp"

namespace depprof {
namespace {

struct Record {
  std::vector<std::string> fields;
  std::vector<bool> quoted;
  std::size_t line = 0;
};

// Splits delimited text into records. Double-quoted fields may contain the
// separator, newlines and doubled quotes.
std::vector<Record> split_records(std::string_view text, char sep) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool field_quoted = false;
  bool in_quotes = false;
  std::size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    current.quoted.push_back(field_quoted);
    field.clear();
    field_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(current));
    current = Record{};
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_quoted) {
      in_quotes = true;
      field_quoted = true;
    } else if (c == sep) {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      end_record();
      ++line;
      current.line = line;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", current.line);
  // A final line without a trailing newline is still a record.
  if (!field.empty() || field_quoted || !current.fields.empty()) end_record();
  return records;
}

}  // namespace

Relation load_csv(std::string_view text, const CsvConfig& config) {
  std::vector<Record> records = split_records(text, config.separator);
  if (records.empty()) throw ParseError("empty input");

  std::vector<std::string> names;
  std::size_t first = 0;
  const std::size_t width = records.front().fields.size();
  if (config.has_header) {
    names = records.front().fields;
    first = 1;
  } else {
    for (std::size_t i = 0; i < width; ++i) names.push_back("c" + std::to_string(i));
  }

  std::vector<std::vector<std::optional<std::string>>> rows;
  rows.reserve(records.size() - first);
  for (std::size_t r = first; r < records.size(); ++r) {
    Record& rec = records[r];
    if (rec.fields.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, found " +
                           std::to_string(rec.fields.size()),
                       rec.line);
    }
    std::vector<std::optional<std::string>> row;
    row.reserve(width);
    for (std::size_t c = 0; c < width; ++c) {
      std::string& f = rec.fields[c];
      // A quoted empty string is a value, not a missing cell.
      bool missing = (f.empty() && !rec.quoted[c]) ||
                     (!config.null_token.empty() && f == config.null_token && !rec.quoted[c]);
      if (missing) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(std::move(f));
      }
    }
    rows.push_back(std::move(row));
  }
  return make_relation(names, rows);
}

Relation load_csv(std::istream& source, const CsvConfig& config) {
  std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  return load_csv(std::string_view(text), config);
}

Relation load_csv_file(const std::string& path, const CsvConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_csv(in, config);
}

namespace {

void write_field(std::ostream& out, const std::string& value, char sep) {
  bool needs_quotes = value.empty() || value.find_first_of(std::string{sep, '"', '\n', '\r'}) !=
                                           std::string::npos;
  if (!needs_quotes) {
    out << value;
    return;
  }
  out << '"';
  for (char c : value) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write_csv(std::ostream& out, const Relation& relation, const CsvConfig& config) {
  const std::size_t m = relation.attribute_count();
  for (std::size_t a = 0; a < m; ++a) {
    if (a) out << config.separator;
    write_field(out, relation.attribute(a).name, config.separator);
  }
  out << '\n';
  for (std::size_t r = 0; r < relation.row_count(); ++r) {
    for (std::size_t a = 0; a < m; ++a) {
      if (a) out << config.separator;
      if (relation.is_null(r, a)) {
        out << config.null_token;
      } else {
        write_field(out, relation.text(r, a), config.separator);
      }
    }
    out << '\n';
  }
}

std::string to_csv(const Relation& relation, const CsvConfig& config) {
  std::ostringstream out;
  write_csv(out, relation, config);
  return out.str();
}

}  // namespace depprof
