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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "depprof/partition.hpp"
#include "depprof/relation.hpp"

namespace depprof {

enum class Metric { kLevenshtein, kEuclidean };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view name);

/// A single cell value as seen by a metric.
using MetricValue = std::variant<std::monostate, double, std::string>;
/// One row's projection onto the rhs attributes.
using ValueTuple = std::vector<MetricValue>;

/// Unit-cost edit distance.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Distance between two rhs tuples. Levenshtein needs single-string tuples;
/// euclidean takes the L2 norm of the per-attribute differences. Null operands
/// and type mismatches throw.
double distance(const ValueTuple& a, const ValueTuple& b, Metric metric);

/// Maximum pairwise distance; a singleton has diameter 0.
double cluster_diameter(const std::vector<ValueTuple>& tuples, Metric metric);

struct MFDStatement {
  AttrSet lhs;
  std::vector<AttrIndex> rhs;
  Metric metric = Metric::kEuclidean;
  double p = 0.0;
};

/// Throws TypeMismatch / InvalidArgument if the statement does not fit the relation.
void check_statement(const Relation& relation, const MFDStatement& stmt);

struct ClusterReport {
  std::vector<RowId> rows;
  /// nullopt when the cluster holds a null rhs value, which makes the distance
  /// undefined; such clusters always count as violations.
  std::optional<double> diameter;
  std::pair<RowId, RowId> witness{0, 0};
};

struct MFDVerdict {
  bool holds = true;
  /// Smallest p for which the statement holds; +infinity when an incomparable
  /// cluster exists.
  double global_diameter = 0.0;
  std::vector<ClusterReport> violating_clusters;
  std::size_t clusters_checked = 0;
};

ValueTuple project(const Relation& relation, std::size_t row, const std::vector<AttrIndex>& attrs);

MFDVerdict validate_mfd(const Relation& relation, const MFDStatement& stmt, unsigned threads = 1);

}  // namespace depprof
