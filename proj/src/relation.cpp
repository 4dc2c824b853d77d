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

#include "depprof/relation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "depprof/errors.hpp"

namespace depprof {

std::string_view to_string(ValueType type) {
  switch (type) {
    case ValueType::kString:
      return "string";
    case ValueType::kInteger:
      return "integer";
    case ValueType::kFloat:
      return "float";
  }
  return "string";
}

Relation::Relation(std::vector<Attribute> attributes, std::vector<Column> columns,
                   std::vector<RowId> row_ids)
    : attributes_(std::move(attributes)), columns_(std::move(columns)), row_ids_(std::move(row_ids)) {
  if (attributes_.size() != columns_.size()) {
    throw InvalidArgument("attribute and column counts differ");
  }
  row_count_ = columns_.empty() ? row_ids_.size() : columns_.front().codes.size();
  for (std::size_t a = 0; a < columns_.size(); ++a) {
    attributes_[a].index = a;
    if (columns_[a].codes.size() != row_count_) throw InvalidArgument("ragged columns");
    if (columns_[a].values.empty()) throw InvalidArgument("column dictionary lacks the null entry");
  }
  if (row_ids_.empty()) {
    row_ids_.resize(row_count_);
    std::iota(row_ids_.begin(), row_ids_.end(), RowId{0});
  } else if (row_ids_.size() != row_count_) {
    throw InvalidArgument("row label count differs from row count");
  }
}

std::optional<AttrIndex> Relation::find_attribute(std::string_view name) const {
  for (const auto& a : attributes_) {
    if (a.name == name) return a.index;
  }
  return std::nullopt;
}

std::optional<std::size_t> Relation::find_row(RowId label) const {
  // Labels stay ascending through every derivation, so binary search works.
  auto it = std::lower_bound(row_ids_.begin(), row_ids_.end(), label);
  if (it == row_ids_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - row_ids_.begin());
}

std::vector<std::string> Relation::attribute_names() const {
  std::vector<std::string> names;
  names.reserve(attributes_.size());
  for (const auto& a : attributes_) names.push_back(a.name);
  return names;
}

namespace {

bool parses_as_integer(const std::string& s, long long& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end && !s.empty();
}

bool parses_as_number(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end && !s.empty() && std::isfinite(out);
}

ValueType infer_type(const std::vector<std::vector<std::optional<std::string>>>& rows,
                     std::size_t col) {
  bool any = false;
  bool all_int = true;
  bool all_num = true;
  for (const auto& row : rows) {
    const auto& cell = row[col];
    if (!cell) continue;
    any = true;
    long long i;
    double d;
    if (all_int && !parses_as_integer(*cell, i)) all_int = false;
    if (!all_int && !parses_as_number(*cell, d)) {
      all_num = false;
      break;
    }
  }
  if (!any || !all_num) return ValueType::kString;
  return all_int ? ValueType::kInteger : ValueType::kFloat;
}

}  // namespace

Relation make_relation(const std::vector<std::string>& names,
                       const std::vector<std::vector<std::optional<std::string>>>& rows) {
  const std::size_t m = names.size();
  std::vector<Attribute> attributes(m);
  std::vector<Column> columns(m);
  for (std::size_t c = 0; c < m; ++c) {
    attributes[c].index = c;
    attributes[c].name = names[c];
  }
  for (const auto& row : rows) {
    if (row.size() != m) throw InvalidArgument("row width differs from attribute count");
  }

  for (std::size_t c = 0; c < m; ++c) {
    const ValueType type = infer_type(rows, c);
    attributes[c].inferred_type = type;
    Column& col = columns[c];
    col.codes.reserve(rows.size());
    col.values.emplace_back();
    if (type != ValueType::kString) col.numbers.push_back(0.0);

    if (type == ValueType::kString) {
      std::unordered_map<std::string_view, ValueId> dict;
      // Keys view into `rows`, which outlives the map.
      for (const auto& row : rows) {
        const auto& cell = row[c];
        if (!cell) {
          col.codes.push_back(kNullId);
          continue;
        }
        auto [it, inserted] = dict.try_emplace(*cell, static_cast<ValueId>(col.values.size()));
        if (inserted) col.values.push_back(*cell);
        col.codes.push_back(it->second);
      }
    } else {
      // Numeric dictionaries key on the parsed value so "1.0" and "1.00" share a code.
      std::map<double, ValueId> dict;
      for (const auto& row : rows) {
        const auto& cell = row[c];
        if (!cell) {
          col.codes.push_back(kNullId);
          continue;
        }
        double v;
        if (type == ValueType::kInteger) {
          long long i;
          parses_as_integer(*cell, i);
          v = static_cast<double>(i);
        } else {
          parses_as_number(*cell, v);
        }
        auto [it, inserted] = dict.try_emplace(v, static_cast<ValueId>(col.values.size()));
        if (inserted) {
          col.values.push_back(*cell);
          col.numbers.push_back(v);
        }
        col.codes.push_back(it->second);
      }
    }
  }

  std::vector<RowId> ids(rows.size());
  std::iota(ids.begin(), ids.end(), RowId{0});
  return Relation(std::move(attributes), std::move(columns), std::move(ids));
}

}  // namespace depprof
