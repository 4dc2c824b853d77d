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

#include "depprof/mfd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "depprof/errors.hpp"
#include "depprof/parallel.hpp"

namespace depprof {

std::string_view to_string(Metric metric) {
  return metric == Metric::kLevenshtein ? "levenshtein" : "euclidean";
}

Metric parse_metric(std::string_view name) {
  if (name == "levenshtein") return Metric::kLevenshtein;
  if (name == "euclidean" || name == "l2") return Metric::kEuclidean;
  throw InvalidArgument("unknown metric '" + std::string(name) + "' (expected levenshtein or euclidean)");
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double distance(const ValueTuple& a, const ValueTuple& b, Metric metric) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("tuples differ in arity");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::holds_alternative<std::monostate>(a[i]) || std::holds_alternative<std::monostate>(b[i])) {
      throw InvalidArgument("distance is undefined for null values");
    }
  }
  if (metric == Metric::kLevenshtein) {
    if (a.size() != 1) throw TypeMismatch("levenshtein compares a single string attribute");
    const auto* sa = std::get_if<std::string>(&a[0]);
    const auto* sb = std::get_if<std::string>(&b[0]);
    if (!sa || !sb) throw TypeMismatch("levenshtein needs string values");
    return static_cast<double>(levenshtein(*sa, *sb));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto* da = std::get_if<double>(&a[i]);
    const auto* db = std::get_if<double>(&b[i]);
    if (!da || !db) throw TypeMismatch("euclidean needs numeric values");
    const double d = *da - *db;
    if (a.size() == 1) return std::abs(d);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double cluster_diameter(const std::vector<ValueTuple>& tuples, Metric metric) {
  if (tuples.empty()) throw InvalidArgument("diameter of an empty cluster");
  double best = 0.0;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    for (std::size_t j = i + 1; j < tuples.size(); ++j) {
      best = std::max(best, distance(tuples[i], tuples[j], metric));
    }
  }
  return best;
}

void check_statement(const Relation& relation, const MFDStatement& stmt) {
  const std::size_t m = relation.attribute_count();
  if (stmt.rhs.empty()) throw InvalidArgument("MFD needs at least one rhs attribute");
  if (!(stmt.p >= 0.0)) throw InvalidArgument("MFD threshold p must be non-negative");
  for (AttrIndex a : stmt.lhs) {
    if (a >= m) throw InvalidArgument("lhs attribute out of range");
  }
  bool any_string = false;
  bool any_numeric = false;
  for (AttrIndex a : stmt.rhs) {
    if (a >= m) throw InvalidArgument("rhs attribute out of range");
    (relation.attribute(a).numeric() ? any_numeric : any_string) = true;
  }
  if (any_string && any_numeric) throw TypeMismatch("MFD rhs mixes string and numeric attributes");
  if (stmt.metric == Metric::kLevenshtein) {
    if (any_numeric) throw TypeMismatch("levenshtein metric needs a string rhs");
    if (stmt.rhs.size() != 1) throw TypeMismatch("levenshtein metric takes a single rhs attribute");
  } else if (any_string) {
    throw TypeMismatch("euclidean metric needs a numeric rhs");
  }
}

ValueTuple project(const Relation& relation, std::size_t row, const std::vector<AttrIndex>& attrs) {
  ValueTuple out;
  out.reserve(attrs.size());
  for (AttrIndex a : attrs) {
    if (relation.is_null(row, a)) {
      out.emplace_back(std::monostate{});
    } else if (relation.attribute(a).numeric()) {
      out.emplace_back(relation.number(row, a));
    } else {
      out.emplace_back(relation.text(row, a));
    }
  }
  return out;
}

namespace {

// Diameter and witness of one lhs class. Rows sharing an rhs code tuple are
// collapsed onto their first row, which leaves both the maximum and the
// smallest-row-id argmax unchanged.
ClusterReport measure_cluster(const Relation& relation, const std::vector<RowId>& rows,
                              const MFDStatement& stmt) {
  ClusterReport report;
  report.rows = rows;
  std::map<std::vector<ValueId>, RowId> first_row;
  for (RowId r : rows) {
    std::vector<ValueId> key;
    key.reserve(stmt.rhs.size());
    for (AttrIndex a : stmt.rhs) {
      if (relation.is_null(r, a)) {
        report.diameter.reset();
        report.witness = {rows.front(), r == rows.front() ? rows[1] : r};
        if (report.witness.first > report.witness.second) std::swap(report.witness.first, report.witness.second);
        return report;
      }
      key.push_back(relation.code(r, a));
    }
    first_row.try_emplace(std::move(key), r);
  }

  std::vector<RowId> reps;
  reps.reserve(first_row.size());
  for (const auto& [key, r] : first_row) reps.push_back(r);
  std::sort(reps.begin(), reps.end());
  std::vector<ValueTuple> tuples;
  tuples.reserve(reps.size());
  for (RowId r : reps) tuples.push_back(project(relation, r, stmt.rhs));

  double best = 0.0;
  std::pair<RowId, RowId> witness{rows[0], rows[1]};
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      const double d = distance(tuples[i], tuples[j], stmt.metric);
      if (d > best) {
        best = d;
        witness = {reps[i], reps[j]};
      }
    }
  }
  report.diameter = best;
  report.witness = witness;
  return report;
}

}  // namespace

MFDVerdict validate_mfd(const Relation& relation, const MFDStatement& stmt, unsigned threads) {
  check_statement(relation, stmt);
  const StrippedPartition classes = build_pli(relation, stmt.lhs);

  std::vector<ClusterReport> reports(classes.clusters.size());
  parallel_for(classes.clusters.size(), threads, [&](std::size_t i) {
    reports[i] = measure_cluster(relation, classes.clusters[i], stmt);
  });

  MFDVerdict verdict;
  verdict.clusters_checked = reports.size();
  for (auto& report : reports) {
    const double d = report.diameter ? *report.diameter : std::numeric_limits<double>::infinity();
    verdict.global_diameter = std::max(verdict.global_diameter, d);
    if (!report.diameter || d > stmt.p) verdict.violating_clusters.push_back(std::move(report));
  }
  verdict.holds = verdict.violating_clusters.empty();
  return verdict;
}

}  // namespace depprof
