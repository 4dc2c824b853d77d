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
#include <vector>

#include "depprof/relation.hpp"

namespace depprof {

using AttrSet = std::vector<AttrIndex>;  // sorted, no duplicates

enum class NullSemantics {
  kEqual,     // NULL = NULL: null cells of a column form one class
  kDistinct,  // NULL != NULL: every null cell is its own class
};

/// Position list index: the equivalence classes of rows agreeing on
/// `attr_set`, with singleton classes stripped.
///
/// Canonical form: rows inside a cluster ascend, clusters are ordered by
/// their smallest row id.
struct StrippedPartition {
  AttrSet attr_set;
  std::vector<std::vector<RowId>> clusters;
  std::size_t n = 0;

  bool empty() const noexcept { return clusters.empty(); }
  /// Sum of cluster sizes.
  std::size_t covered_rows() const noexcept;

  friend bool operator==(const StrippedPartition&, const StrippedPartition&) = default;
};

/// Partition of the empty attribute set: a single class holding all rows.
StrippedPartition build_universal_pli(std::size_t n);

StrippedPartition build_pli(const Relation& relation, AttrIndex attr,
                            NullSemantics nulls = NullSemantics::kEqual);

/// Partition of the union of both attribute sets. Throws InvalidArgument when
/// the inputs describe relations of different sizes.
StrippedPartition intersect_pli(const StrippedPartition& p, const StrippedPartition& q);

/// Partition of an arbitrary attribute set by iterated intersection.
StrippedPartition build_pli(const Relation& relation, const AttrSet& attrs,
                            NullSemantics nulls = NullSemantics::kEqual);

/// e(X) = sum of cluster sizes minus cluster count; zero iff X is a key.
std::uint64_t partition_error(const StrippedPartition& p);

/// Number of unordered row pairs that share a cluster.
std::uint64_t agreeing_pairs(const StrippedPartition& p);

/// Sorts rows within clusters and clusters by first row.
void canonicalize(std::vector<std::vector<RowId>>& clusters);

AttrSet attr_union(const AttrSet& a, const AttrSet& b);

}  // namespace depprof
