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

#include <compare>
#include <stop_token>
#include <string>
#include <vector>

#include "depprof/partition.hpp"
#include "depprof/relation.hpp"

namespace depprof {

/// lhs -> rhs with a single rhs attribute; lhs may be empty.
struct FD {
  AttrSet lhs;
  AttrIndex rhs = 0;

  friend bool operator==(const FD&, const FD&) = default;
};

/// Canonical order: rhs-major, then lhs lexicographically.
inline std::strong_ordering operator<=>(const FD& a, const FD& b) {
  if (auto c = a.rhs <=> b.rhs; c != 0) return c;
  return a.lhs <=> b.lhs;
}

/// A set of minimal FDs together with the schema it was mined on.
struct FDSet {
  std::vector<FD> fds;  // canonical order, no duplicates
  std::vector<std::string> schema;
  std::string provenance;

  bool contains(const FD& fd) const;
};

struct DiscoveryOptions {
  std::size_t max_lhs = 3;
  unsigned threads = 1;
  NullSemantics nulls = NullSemantics::kEqual;
  std::stop_token stop;  // checked between lattice levels
};

/// "[a, b] -> c"
std::string render_fd(const FD& fd, const std::vector<std::string>& names);

/// True iff no two rows agree on lhs while differing on rhs.
bool fd_holds(const Relation& relation, const FD& fd, NullSemantics nulls = NullSemantics::kEqual);

/// All minimal FDs with |lhs| <= max_lhs, including empty-lhs FDs for
/// constant columns. Attribute sets are limited to 64 columns.
FDSet discover_fds(const Relation& relation, const DiscoveryOptions& options = {});

}  // namespace depprof
