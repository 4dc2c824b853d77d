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
#include <set>
#include <utility>
#include <vector>

#include "depprof/errors.hpp"
#include "depprof/partition.hpp"
#include "depprof/rational.hpp"
#include "depprof/relation.hpp"

namespace depprof::dedup {

struct DedupConfig {
  Rational threshold{1, 100};
  std::size_t window = 5;
  std::size_t k = 1;
  std::set<AttrIndex> excluded_keys;
};

void validate(const DedupConfig& cfg, const Relation& relation);

struct KeyCandidate {
  AttrIndex lhs = 0;
  std::vector<AttrIndex> rhs_list;
  std::size_t rhs_count = 0;
  bool is_unique = false;
};

/// Row identities here are stable row labels (Relation::row_ids), which
/// coincide with positions for a freshly loaded relation.
struct DuplicatePair {
  RowId row_a = 0;
  RowId row_b = 0;
  std::vector<AttrIndex> matched_attrs;
  std::size_t match_count = 0;

  friend bool operator==(const DuplicatePair&, const DuplicatePair&) = default;
};

struct Resolution {
  RowId row_a = 0;
  RowId row_b = 0;
  RowId keep = 0;
  std::set<AttrIndex> copy_attrs;

  RowId discard() const noexcept { return keep == row_a ? row_b : row_a; }
  friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// Decision for a pair that is not the one currently proposed.
class NotProposed : public Error {
 public:
  using Error::Error;
};

/// Candidates from single-attribute AFDs, largest dependent list first.
std::vector<KeyCandidate> rank_dedup_keys(const Relation& relation, const DedupConfig& cfg);

/// Stable sort by the candidate's lhs, then its rhs list; nulls last.
/// Returns row positions in sorted order.
std::vector<std::size_t> sort_for_neighborhood(const Relation& relation, const KeyCandidate& key);

/// Position pairs (i, j), i < j, j - i < window, ascending.
std::vector<std::pair<std::size_t, std::size_t>> window_pairs(std::size_t n, std::size_t window);

/// Counts attributes equal on both rows (non-null; strings trimmed and
/// case-folded). Rows are positions; the pair reports row labels.
std::optional<DuplicatePair> match_pair(const Relation& relation, std::size_t row_a, std::size_t row_b,
                                        std::size_t k);

/// Sorted-neighbourhood scan: every pair within the window that matches on
/// at least k attributes, in stream order.
std::vector<DuplicatePair> find_duplicates(const Relation& relation,
                                           const std::vector<std::size_t>& permutation,
                                           std::size_t window, std::size_t k);

/// The relation with `keep` updated from the discarded row on copy_attrs and
/// the discarded row removed. Throws StaleResolution if either row is gone.
Relation apply_resolution(const Relation& relation, const Resolution& resolution);

/// Interactive resolution over a fixed candidate list. Decisions are kept
/// in an append-only journal; the current relation is always the base
/// relation with the journal replayed on top.
class Session {
 public:
  Session(Relation base, std::vector<DuplicatePair> candidates);

  /// The next candidate that is neither decided nor skipped and whose rows
  /// both still exist.
  std::optional<DuplicatePair> propose() const;
  /// Applies a resolution for the proposed pair. Throws NotProposed or
  /// StaleResolution.
  void decide(const Resolution& resolution);
  void skip();
  /// Drops the last journal entry. Returns false when the journal is empty.
  bool undo();

  const Relation& current() const noexcept { return current_; }
  const Relation& base() const noexcept { return base_; }
  const std::vector<Resolution>& journal() const noexcept { return journal_; }
  const std::vector<DuplicatePair>& candidates() const noexcept { return candidates_; }

  /// Replays a persisted journal from scratch.
  void restore(const std::vector<Resolution>& journal);

 private:
  bool open(const DuplicatePair& pair) const;

  Relation base_;
  Relation current_;
  std::vector<DuplicatePair> candidates_;
  std::vector<Resolution> journal_;
  std::set<std::pair<RowId, RowId>> skipped_;
};

Relation replay(const Relation& base, const std::vector<Resolution>& journal);

}  // namespace depprof::dedup
