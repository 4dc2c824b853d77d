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
#include "depprof/relation.hpp"

namespace depprof::typo {

struct TypoConfig {
  Rational threshold{1, 100};
  double radius = 2.0;
  double ratio = 0.5;
  std::size_t max_lhs = 2;
  /// Show clusters whose inside-radius share is at least `ratio` instead.
  bool invert_display = false;
  unsigned threads = 1;
};

/// Throws InvalidArgument on out-of-range fields.
void validate(const TypoConfig& cfg);

struct Member {
  RowId row = 0;
  std::optional<std::string> value;  // nullopt for a null cell
  /// Distance to the central value; +infinity when either side is null.
  double distance = 0.0;
};

struct ViolationCluster {
  FD fd;
  std::vector<std::optional<std::string>> lhs_value;
  std::vector<RowId> rows;
  std::optional<std::string> central_value;
  std::size_t central_frequency = 0;
  std::vector<Member> members;  // one per row, in row order
};

struct Fix {
  RowId row = 0;
  std::string current;
  std::string suggested;

  friend bool operator==(const Fix&, const Fix&) = default;
};

/// Minimal AFDs with 0 < g1 <= threshold.
std::vector<AFD> mine_almost_fds(const Relation& relation, const TypoConfig& cfg);

/// One cluster per lhs class whose rows carry at least two distinct rhs
/// values. The central value is the mode, ties going to the value seen first.
std::vector<ViolationCluster> violation_clusters(const Relation& relation, const FD& fd);

/// Share of members within `radius` of the central value.
double inside_share(const ViolationCluster& cluster, double radius);

/// Whether the cluster is displayed: share < ratio, or share >= ratio when inverted.
bool is_displayed(const ViolationCluster& cluster, const TypoConfig& cfg);

/// The displayed clusters, in input order.
std::vector<ViolationCluster> filter_clusters(const std::vector<ViolationCluster>& clusters,
                                              const TypoConfig& cfg);

/// Replace members at distance in (0, radius] with the central value.
std::vector<Fix> propose_fixes(const ViolationCluster& cluster, double radius);

}  // namespace depprof::typo
