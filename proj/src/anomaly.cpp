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

#include "depprof/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "depprof/errors.hpp"

namespace depprof::anomaly {

FDDiff fd_diff(const FDSet& old_set, const FDSet& new_set) {
  if (!old_set.schema.empty() && !new_set.schema.empty() && old_set.schema != new_set.schema) {
    throw InvalidArgument("FD sets were mined on different schemas");
  }
  FDDiff diff;
  std::set_difference(old_set.fds.begin(), old_set.fds.end(), new_set.fds.begin(), new_set.fds.end(),
                      std::back_inserter(diff.lost));
  std::set_difference(new_set.fds.begin(), new_set.fds.end(), old_set.fds.begin(), old_set.fds.end(),
                      std::back_inserter(diff.gained));
  return diff;
}

ProbeResult afd_probe(const Relation& relation, const FD& fd, const std::vector<Rational>& thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw InvalidArgument("probe thresholds must ascend");
  }
  ProbeResult out;
  out.g1 = g1_error(relation, fd);
  auto it = std::lower_bound(thresholds.begin(), thresholds.end(), out.g1);
  if (it != thresholds.end()) out.first_holding = *it;
  return out;
}

SweepResult mfd_sweep(const Relation& relation, const FD& fd, const SweepConfig& cfg) {
  if (!(cfg.step > 0.0) || !(cfg.d > 0.0)) throw InvalidArgument("sweep needs positive d and step");
  if (cfg.step > cfg.d) throw InvalidArgument("sweep step exceeds d");

  MFDStatement stmt{fd.lhs, {fd.rhs}, cfg.metric, 0.0};
  SweepResult out;
  // One validation yields the minimal satisfying p; the grid point is derived
  // from it and then confirmed.
  MFDVerdict probe = validate_mfd(relation, stmt);
  const double diameter = probe.global_diameter;
  if (std::isinf(diameter)) {
    out.verdict = std::move(probe);
    out.diagnostic = "null rhs values make some clusters incomparable";
    return out;
  }

  // Grid points are k * step; a tiny slack keeps d itself on the grid despite
  // rounding in the product.
  const double limit = cfg.d * (1.0 + 1e-12);
  double k = std::max(1.0, std::ceil(diameter / cfg.step));
  while (k > 1.0 && (k - 1.0) * cfg.step >= diameter) k -= 1.0;
  while (k * cfg.step < diameter) k += 1.0;
  const double p = k * cfg.step;
  if (p > limit) {
    stmt.p = cfg.d;
    out.verdict = validate_mfd(relation, stmt);
    out.diagnostic = "no grid point up to d satisfies the dependency (diameter " +
                     std::to_string(diameter) + ")";
    return out;
  }
  stmt.p = p;
  out.verdict = validate_mfd(relation, stmt);
  out.p = p;
  return out;
}

double suggest_sweep_bound(const Relation& relation, AttrIndex rhs) {
  if (rhs >= relation.attribute_count()) throw InvalidArgument("attribute out of range");
  if (!relation.attribute(rhs).numeric()) throw TypeMismatch("sweep bound needs a numeric attribute");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < relation.row_count(); ++r) {
    if (relation.is_null(r, rhs)) continue;
    sum += relation.number(r, rhs);
    ++count;
  }
  if (count == 0) return 0.0;
  const double mean = sum / static_cast<double>(count);
  double sq = 0.0;
  for (std::size_t r = 0; r < relation.row_count(); ++r) {
    if (relation.is_null(r, rhs)) continue;
    const double d = relation.number(r, rhs) - mean;
    sq += d * d;
  }
  return std::sqrt(sq / static_cast<double>(count));
}

AnomalyState advance_canonical(const AnomalyState& state, const std::string& partition_id,
                               const FDSet& fds, const std::vector<MFDStatement>& accepted_mfds) {
  AnomalyState next = state;
  HistoryEntry entry{partition_id, fds, fd_diff(state.canonical_fds, fds)};
  next.canonical_fds = fds;
  next.canonical_mfds.insert(next.canonical_mfds.end(), accepted_mfds.begin(), accepted_mfds.end());
  next.history.push_back(std::move(entry));
  return next;
}

std::vector<FD> replay_history(const std::vector<HistoryEntry>& history) {
  std::vector<FD> current;
  for (const auto& h : history) {
    std::vector<FD> kept;
    std::set_difference(current.begin(), current.end(), h.diff.lost.begin(), h.diff.lost.end(),
                        std::back_inserter(kept));
    current.clear();
    std::set_union(kept.begin(), kept.end(), h.diff.gained.begin(), h.diff.gained.end(),
                   std::back_inserter(current));
  }
  return current;
}

Relation concat_relations(const std::vector<Relation>& parts) {
  if (parts.empty()) throw InvalidArgument("nothing to concatenate");
  const auto names = parts.front().attribute_names();
  std::vector<std::vector<std::optional<std::string>>> rows;
  for (const auto& part : parts) {
    if (part.attribute_names() != names) throw InvalidArgument("partitions have different schemas");
    for (std::size_t r = 0; r < part.row_count(); ++r) {
      std::vector<std::optional<std::string>> row;
      for (AttrIndex a = 0; a < part.attribute_count(); ++a) {
        if (part.is_null(r, a)) {
          row.emplace_back(std::nullopt);
        } else {
          row.emplace_back(part.text(r, a));
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return make_relation(names, rows);
}

}  // namespace depprof::anomaly
