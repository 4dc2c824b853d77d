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

#include "depprof/typo.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "depprof/errors.hpp"
#include "depprof/mfd.hpp"

namespace depprof::typo {

void validate(const TypoConfig& cfg) {
  if (!(cfg.radius >= 0.0)) throw InvalidArgument("radius must be non-negative");
  if (!(cfg.ratio >= 0.0 && cfg.ratio <= 1.0)) throw InvalidArgument("ratio must lie in [0, 1]");
  if (cfg.max_lhs < 1) throw InvalidArgument("max_lhs must be at least 1");
}

std::vector<AFD> mine_almost_fds(const Relation& relation, const TypoConfig& cfg) {
  validate(cfg);
  std::vector<AFD> out;
  for (AFD& afd : discover_afds(relation, cfg.threshold, {.max_lhs = cfg.max_lhs, .threads = cfg.threads, .nulls = NullSemantics::kEqual, .stop = {}})) {
    if (afd.error > Rational{}) out.push_back(std::move(afd));
  }
  return out;
}

namespace {

double member_distance(const Relation& relation, AttrIndex rhs, RowId row, ValueId central) {
  const ValueId code = relation.code(row, rhs);
  if (code == central) return 0.0;
  if (code == kNullId || central == kNullId) return std::numeric_limits<double>::infinity();
  const Column& col = relation.column(rhs);
  if (relation.attribute(rhs).numeric()) return std::abs(col.numbers[code] - col.numbers[central]);
  return static_cast<double>(levenshtein(col.values[code], col.values[central]));
}

std::optional<std::string> cell(const Relation& relation, RowId row, AttrIndex attr) {
  if (relation.is_null(row, attr)) return std::nullopt;
  return relation.text(row, attr);
}

}  // namespace

std::vector<ViolationCluster> violation_clusters(const Relation& relation, const FD& fd) {
  if (fd.rhs >= relation.attribute_count()) throw InvalidArgument("rhs attribute out of range");
  const StrippedPartition lhs = build_pli(relation, fd.lhs);
  std::vector<ViolationCluster> out;
  for (const auto& rows : lhs.clusters) {
    // value code -> (frequency, first row); first rows ascend with insertion.
    std::map<ValueId, std::pair<std::size_t, RowId>> freq;
    for (RowId r : rows) {
      auto [it, inserted] = freq.try_emplace(relation.code(r, fd.rhs), 0, r);
      ++it->second.first;
    }
    if (freq.size() < 2) continue;

    ValueId central = 0;
    std::size_t best = 0;
    RowId best_first = 0;
    for (const auto& [code, stats] : freq) {
      const auto [count, first] = stats;
      if (count > best || (count == best && first < best_first)) {
        central = code;
        best = count;
        best_first = first;
      }
    }

    ViolationCluster c;
    c.fd = fd;
    for (AttrIndex a : fd.lhs) c.lhs_value.push_back(cell(relation, rows.front(), a));
    c.rows = rows;
    c.central_value = cell(relation, best_first, fd.rhs);
    c.central_frequency = best;
    c.members.reserve(rows.size());
    for (RowId r : rows) {
      c.members.push_back({r, cell(relation, r, fd.rhs), member_distance(relation, fd.rhs, r, central)});
    }
    out.push_back(std::move(c));
  }
  return out;
}

double inside_share(const ViolationCluster& cluster, double radius) {
  if (cluster.members.empty()) return 0.0;
  std::size_t inside = 0;
  for (const Member& m : cluster.members) {
    if (m.distance <= radius) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(cluster.members.size());
}

bool is_displayed(const ViolationCluster& cluster, const TypoConfig& cfg) {
  const bool below = inside_share(cluster, cfg.radius) < cfg.ratio;
  return cfg.invert_display ? !below : below;
}

std::vector<ViolationCluster> filter_clusters(const std::vector<ViolationCluster>& clusters,
                                              const TypoConfig& cfg) {
  std::vector<ViolationCluster> shown;
  for (const auto& c : clusters) {
    if (is_displayed(c, cfg)) shown.push_back(c);
  }
  return shown;
}

std::vector<Fix> propose_fixes(const ViolationCluster& cluster, double radius) {
  std::vector<Fix> fixes;
  if (!cluster.central_value) return fixes;
  for (const Member& m : cluster.members) {
    if (!m.value || m.distance <= 0.0 || m.distance > radius) continue;
    fixes.push_back({m.row, *m.value, *cluster.central_value});
  }
  return fixes;
}

}  // namespace depprof::typo
