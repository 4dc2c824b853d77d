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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace depprof {

using RowId = std::uint32_t;
using ValueId = std::uint32_t;
using AttrIndex = std::size_t;

/// Every column reserves code 0 for the null marker.
inline constexpr ValueId kNullId = 0;

enum class ValueType { kString, kInteger, kFloat };

std::string_view to_string(ValueType type);

struct Attribute {
  AttrIndex index = 0;
  std::string name;
  ValueType inferred_type = ValueType::kString;

  bool numeric() const noexcept { return inferred_type != ValueType::kString; }
};

struct CsvConfig {
  char separator = ',';
  bool has_header = true;
  std::string null_token;
};

/// One dictionary-encoded column. `values[0]` is the null marker; numeric
/// columns mirror every dictionary entry into `numbers`.
struct Column {
  std::vector<ValueId> codes;
  std::vector<std::string> values;
  std::vector<double> numbers;
};

/// Immutable dictionary-encoded table.
///
/// Codes are assigned in first-occurrence order starting at 1. `row_ids` are
/// stable row labels: a freshly loaded relation numbers its rows 0..n-1, and
/// derived relations (after duplicate resolution) keep the labels of the rows
/// they retain so that later edits can be checked for staleness.
class Relation {
 public:
  Relation() = default;
  Relation(std::vector<Attribute> attributes, std::vector<Column> columns,
           std::vector<RowId> row_ids = {});

  std::size_t row_count() const noexcept { return row_count_; }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }

  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
  const Attribute& attribute(AttrIndex attr) const { return attributes_.at(attr); }
  const Column& column(AttrIndex attr) const { return columns_.at(attr); }
  const std::vector<RowId>& row_ids() const noexcept { return row_ids_; }

  ValueId code(std::size_t row, AttrIndex attr) const { return columns_[attr].codes[row]; }
  bool is_null(std::size_t row, AttrIndex attr) const { return code(row, attr) == kNullId; }
  const std::string& text(std::size_t row, AttrIndex attr) const {
    return columns_[attr].values[code(row, attr)];
  }
  /// Numeric value of a cell; only meaningful for numeric, non-null cells.
  double number(std::size_t row, AttrIndex attr) const {
    return columns_[attr].numbers[code(row, attr)];
  }

  /// Position of the attribute with this name; the first match wins.
  std::optional<AttrIndex> find_attribute(std::string_view name) const;
  /// Position of the row carrying this stable label.
  std::optional<std::size_t> find_row(RowId label) const;

  std::vector<std::string> attribute_names() const;

 private:
  std::vector<Attribute> attributes_;
  std::vector<Column> columns_;
  std::vector<RowId> row_ids_;
  std::size_t row_count_ = 0;
};

/// Builds a relation from already-split string cells, applying the same type
/// inference and null handling as CSV loading. `rows` must be rectangular.
Relation make_relation(const std::vector<std::string>& names,
                       const std::vector<std::vector<std::optional<std::string>>>& rows);

Relation load_csv(std::istream& source, const CsvConfig& config = {});
Relation load_csv(std::string_view text, const CsvConfig& config = {});
Relation load_csv_file(const std::string& path, const CsvConfig& config = {});

/// Writes the relation back as CSV with a header row; nulls become the null token.
void write_csv(std::ostream& out, const Relation& relation, const CsvConfig& config = {});
std::string to_csv(const Relation& relation, const CsvConfig& config = {});

}  // namespace depprof
