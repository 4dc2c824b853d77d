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
#include <vector>

#include "depprof/afd.hpp"
#include "depprof/fd.hpp"
#include "depprof/mfd.hpp"

namespace depprof::anomaly {

struct FDDiff {
  std::vector<FD> lost;
  std::vector<FD> gained;

  friend bool operator==(const FDDiff&, const FDDiff&) = default;
};

/// lost = old \ new, gained = new \ old. An empty old schema stands for "no
/// knowledge yet" and matches any schema.
FDDiff fd_diff(const FDSet& old_set, const FDSet& new_set);

struct ProbeResult {
  Rational g1;
  std::optional<Rational> first_holding;
};

/// Exact g1 of the FD plus the first listed threshold it meets.
ProbeResult afd_probe(const Relation& relation, const FD& fd, const std::vector<Rational>& thresholds);

struct SweepConfig {
  double d = 10.0;
  double step = 1.0;
  Metric metric = Metric::kEuclidean;
};

struct SweepResult {
  std::optional<double> p;  // smallest grid point at which the MFD holds
  MFDVerdict verdict;       // evaluated at p, or at the diameter when absent
  std::string diagnostic;
};

/// Scans p = step, 2*step, ... <= d for the first p at which lhs -> rhs holds
/// as a metric dependency.
SweepResult mfd_sweep(const Relation& relation, const FD& fd, const SweepConfig& cfg);

/// Population standard deviation of the non-null values of a numeric column.
double suggest_sweep_bound(const Relation& relation, AttrIndex rhs);

struct HistoryEntry {
  std::string partition_id;
  FDSet fds;
  FDDiff diff;
};

struct AnomalyState {
  FDSet canonical_fds;
  std::vector<MFDStatement> canonical_mfds;
  std::vector<HistoryEntry> history;
};

/// Accepts a partition's FDs as the new canonical set, along with the MFDs
/// the user settled on for the FDs it lost.
AnomalyState advance_canonical(const AnomalyState& state, const std::string& partition_id,
                               const FDSet& fds, const std::vector<MFDStatement>& accepted_mfds);

/// Applies every recorded diff to an empty set, in order.
std::vector<FD> replay_history(const std::vector<HistoryEntry>& history);

/// Rows of all relations stacked in order; schemas must agree by name.
Relation concat_relations(const std::vector<Relation>& parts);

}  // namespace depprof::anomaly
