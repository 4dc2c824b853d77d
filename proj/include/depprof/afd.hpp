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

#include <map>
#include <vector>

#include "depprof/fd.hpp"
#include "depprof/rational.hpp"

namespace depprof {

struct AFD {
  FD fd;
  Rational error;  // g1

  friend bool operator==(const AFD&, const AFD&) = default;
};

/// g1 error: violating unordered row pairs over C(n,2). Relations with fewer
/// than two rows have no pairs and report 0 (see `g1_degenerate`).
Rational g1_error(const Relation& relation, const FD& fd, NullSemantics nulls = NullSemantics::kEqual);

inline bool g1_degenerate(const Relation& relation) { return relation.row_count() < 2; }

/// Violating pairs of lhs -> rhs given the lhs partition: pairs sharing an lhs
/// class minus pairs that also share the rhs value.
std::uint64_t violating_pairs(const StrippedPartition& lhs, const Column& rhs, NullSemantics nulls);

/// Minimal AFDs with g1 <= threshold (inclusive) and |lhs| <= max_lhs, where
/// minimality means no proper lhs subset also meets the threshold. Canonical
/// FD order.
std::vector<AFD> discover_afds(const Relation& relation, const Rational& threshold,
                               const DiscoveryOptions& options = {});

/// For each lhs attribute i, the attributes j != i with g1({i} -> j) <= threshold,
/// ascending. Every attribute has an entry, possibly empty.
std::map<AttrIndex, std::vector<AttrIndex>> single_attribute_afds(
    const Relation& relation, const Rational& threshold, NullSemantics nulls = NullSemantics::kEqual);

}  // namespace depprof
