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

#include "depprof/partition.hpp"

#include <algorithm>
#include <numeric>

#include "depprof/errors.hpp"

namespace depprof {

std::size_t StrippedPartition::covered_rows() const noexcept {
  std::size_t total = 0;
  for (const auto& c : clusters) total += c.size();
  return total;
}

void canonicalize(std::vector<std::vector<RowId>>& clusters) {
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

AttrSet attr_union(const AttrSet& a, const AttrSet& b) {
  AttrSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

StrippedPartition build_universal_pli(std::size_t n) {
  StrippedPartition p;
  p.n = n;
  if (n >= 2) {
    std::vector<RowId> all(n);
    std::iota(all.begin(), all.end(), RowId{0});
    p.clusters.push_back(std::move(all));
  }
  return p;
}

StrippedPartition build_pli(const Relation& relation, AttrIndex attr, NullSemantics nulls) {
  if (attr >= relation.attribute_count()) throw InvalidArgument("attribute index out of range");
  const Column& col = relation.column(attr);
  const std::size_t n = relation.row_count();

  // Codes are dense (first-occurrence order), so bucketing by code keeps
  // clusters ordered by their first row without a sort.
  std::vector<std::vector<RowId>> buckets(col.values.size());
  for (std::size_t r = 0; r < n; ++r) buckets[col.codes[r]].push_back(static_cast<RowId>(r));

  StrippedPartition p;
  p.attr_set = {attr};
  p.n = n;
  for (ValueId code = 0; code < buckets.size(); ++code) {
    if (code == kNullId && nulls == NullSemantics::kDistinct) continue;
    if (buckets[code].size() >= 2) p.clusters.push_back(std::move(buckets[code]));
  }
  std::sort(p.clusters.begin(), p.clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return p;
}

StrippedPartition intersect_pli(const StrippedPartition& p, const StrippedPartition& q) {
  if (p.n != q.n) throw InvalidArgument("cannot intersect partitions of different relations");

  StrippedPartition out;
  out.attr_set = attr_union(p.attr_set, q.attr_set);
  out.n = p.n;
  if (p.empty() || q.empty()) return out;

  // Probe table: row -> index of its q-cluster, or -1 for q-singletons.
  constexpr std::uint32_t kNone = ~std::uint32_t{0};
  std::vector<std::uint32_t> probe(p.n, kNone);
  for (std::uint32_t i = 0; i < q.clusters.size(); ++i) {
    for (RowId r : q.clusters[i]) probe[r] = i;
  }

  std::vector<std::vector<RowId>> groups(q.clusters.size());
  std::vector<std::uint32_t> touched;
  for (const auto& cluster : p.clusters) {
    for (RowId r : cluster) {
      std::uint32_t g = probe[r];
      if (g == kNone) continue;
      if (groups[g].empty()) touched.push_back(g);
      groups[g].push_back(r);
    }
    for (std::uint32_t g : touched) {
      if (groups[g].size() >= 2) out.clusters.push_back(std::move(groups[g]));
      groups[g].clear();
    }
    touched.clear();
  }
  // Rows inside each group ascend already (p's clusters are canonical).
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

StrippedPartition build_pli(const Relation& relation, const AttrSet& attrs, NullSemantics nulls) {
  if (attrs.empty()) return build_universal_pli(relation.row_count());
  StrippedPartition acc = build_pli(relation, attrs.front(), nulls);
  for (std::size_t i = 1; i < attrs.size(); ++i) {
    if (acc.empty()) {
      acc.attr_set = attr_union(acc.attr_set, {attrs[i]});
      continue;
    }
    acc = intersect_pli(acc, build_pli(relation, attrs[i], nulls));
  }
  return acc;
}

std::uint64_t partition_error(const StrippedPartition& p) {
  return p.covered_rows() - p.clusters.size();
}

std::uint64_t agreeing_pairs(const StrippedPartition& p) {
  std::uint64_t total = 0;
  for (const auto& c : p.clusters) {
    const std::uint64_t s = c.size();
    total += s * (s - 1) / 2;
  }
  return total;
}

}  // namespace depprof
