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

#include "depprof/dedup.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string_view>

#include "depprof/afd.hpp"

namespace depprof::dedup {

void validate(const DedupConfig& cfg, const Relation& relation) {
  if (cfg.window < 2) throw InvalidArgument("window must be at least 2");
  if (cfg.k < 1) throw InvalidArgument("k must be positive");
  if (cfg.k > relation.attribute_count()) throw InvalidArgument("k exceeds the attribute count");
  for (AttrIndex a : cfg.excluded_keys) {
    if (a >= relation.attribute_count()) throw InvalidArgument("excluded key out of range");
  }
}

std::vector<KeyCandidate> rank_dedup_keys(const Relation& relation, const DedupConfig& cfg) {
  std::vector<KeyCandidate> out;
  for (auto& [lhs, rhs] : single_attribute_afds(relation, cfg.threshold)) {
    if (rhs.empty() || cfg.excluded_keys.contains(lhs)) continue;
    KeyCandidate c;
    c.lhs = lhs;
    c.rhs_count = rhs.size();
    c.rhs_list = std::move(rhs);
    c.is_unique = build_pli(relation, lhs).empty();
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.rhs_count > b.rhs_count; });
  return out;
}

namespace {

int compare_cells(const Relation& relation, std::size_t a, std::size_t b, AttrIndex attr) {
  const bool na = relation.is_null(a, attr), nb = relation.is_null(b, attr);
  if (na || nb) return na == nb ? 0 : (na ? 1 : -1);
  if (relation.attribute(attr).numeric()) {
    const double x = relation.number(a, attr), y = relation.number(b, attr);
    return x < y ? -1 : (y < x ? 1 : 0);
  }
  const int c = relation.text(a, attr).compare(relation.text(b, attr));
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string normalize(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(first, last - first + 1));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<std::size_t> sort_for_neighborhood(const Relation& relation, const KeyCandidate& key) {
  std::vector<AttrIndex> attrs{key.lhs};
  attrs.insert(attrs.end(), key.rhs_list.begin(), key.rhs_list.end());
  std::vector<std::size_t> perm(relation.row_count());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    for (AttrIndex attr : attrs) {
      if (int c = compare_cells(relation, a, b, attr); c != 0) return c < 0;
    }
    return false;
  });
  return perm;
}

std::vector<std::pair<std::size_t, std::size_t>> window_pairs(std::size_t n, std::size_t window) {
  if (window < 2) throw InvalidArgument("window must be at least 2");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && j - i < window; ++j) out.emplace_back(i, j);
  }
  return out;
}

std::optional<DuplicatePair> match_pair(const Relation& relation, std::size_t row_a, std::size_t row_b,
                                        std::size_t k) {
  if (row_a == row_b) throw InvalidArgument("a row cannot duplicate itself");
  DuplicatePair pair;
  for (AttrIndex a = 0; a < relation.attribute_count(); ++a) {
    const ValueId ca = relation.code(row_a, a), cb = relation.code(row_b, a);
    if (ca == kNullId || cb == kNullId) continue;
    bool same = ca == cb;
    if (!same && !relation.attribute(a).numeric()) {
      same = normalize(relation.text(row_a, a)) == normalize(relation.text(row_b, a));
    }
    if (same) pair.matched_attrs.push_back(a);
  }
  pair.match_count = pair.matched_attrs.size();
  if (pair.match_count < k) return std::nullopt;
  pair.row_a = relation.row_ids()[row_a];
  pair.row_b = relation.row_ids()[row_b];
  if (pair.row_a > pair.row_b) std::swap(pair.row_a, pair.row_b);
  return pair;
}

std::vector<DuplicatePair> find_duplicates(const Relation& relation,
                                           const std::vector<std::size_t>& permutation,
                                           std::size_t window, std::size_t k) {
  std::vector<DuplicatePair> out;
  for (auto [i, j] : window_pairs(permutation.size(), window)) {
    if (auto pair = match_pair(relation, permutation[i], permutation[j], k)) out.push_back(std::move(*pair));
  }
  return out;
}

Relation apply_resolution(const Relation& relation, const Resolution& resolution) {
  if (resolution.keep != resolution.row_a && resolution.keep != resolution.row_b) {
    throw InvalidArgument("kept row must belong to the pair");
  }
  if (resolution.row_a == resolution.row_b) throw InvalidArgument("a row cannot duplicate itself");
  const auto keep = relation.find_row(resolution.keep);
  const auto drop = relation.find_row(resolution.discard());
  if (!keep || !drop) {
    throw StaleResolution("row " + std::to_string(keep ? resolution.discard() : resolution.keep) +
                          " was already removed");
  }
  for (AttrIndex a : resolution.copy_attrs) {
    if (a >= relation.attribute_count()) throw InvalidArgument("copy attribute out of range");
  }

  std::vector<Attribute> attributes = relation.attributes();
  std::vector<Column> columns;
  columns.reserve(relation.attribute_count());
  for (AttrIndex a = 0; a < relation.attribute_count(); ++a) {
    const Column& src = relation.column(a);
    Column col;
    col.values = src.values;
    col.numbers = src.numbers;
    col.codes.reserve(relation.row_count() - 1);
    for (std::size_t r = 0; r < relation.row_count(); ++r) {
      if (r == *drop) continue;
      ValueId code = src.codes[r];
      if (r == *keep && resolution.copy_attrs.contains(a)) code = src.codes[*drop];
      col.codes.push_back(code);
    }
    columns.push_back(std::move(col));
  }
  std::vector<RowId> ids;
  ids.reserve(relation.row_count() - 1);
  for (std::size_t r = 0; r < relation.row_count(); ++r) {
    if (r != *drop) ids.push_back(relation.row_ids()[r]);
  }
  return Relation(std::move(attributes), std::move(columns), std::move(ids));
}

Relation replay(const Relation& base, const std::vector<Resolution>& journal) {
  Relation current = base;
  for (const auto& r : journal) current = apply_resolution(current, r);
  return current;
}

Session::Session(Relation base, std::vector<DuplicatePair> candidates)
    : base_(std::move(base)), current_(base_), candidates_(std::move(candidates)) {}

bool Session::open(const DuplicatePair& pair) const {
  const auto key = std::pair{pair.row_a, pair.row_b};
  if (skipped_.contains(key)) return false;
  for (const auto& r : journal_) {
    if (r.row_a == pair.row_a && r.row_b == pair.row_b) return false;
  }
  return current_.find_row(pair.row_a) && current_.find_row(pair.row_b);
}

std::optional<DuplicatePair> Session::propose() const {
  for (const auto& pair : candidates_) {
    if (open(pair)) return pair;
  }
  return std::nullopt;
}

void Session::decide(const Resolution& resolution) {
  if (!current_.find_row(resolution.row_a) || !current_.find_row(resolution.row_b)) {
    throw StaleResolution("pair (" + std::to_string(resolution.row_a) + ", " +
                          std::to_string(resolution.row_b) + ") refers to a removed row");
  }
  const auto proposed = propose();
  if (!proposed || proposed->row_a != resolution.row_a || proposed->row_b != resolution.row_b) {
    throw NotProposed("pair (" + std::to_string(resolution.row_a) + ", " +
                      std::to_string(resolution.row_b) + ") is not the proposed pair");
  }
  current_ = apply_resolution(current_, resolution);
  journal_.push_back(resolution);
}

void Session::skip() {
  if (auto p = propose()) skipped_.emplace(p->row_a, p->row_b);
}

bool Session::undo() {
  if (journal_.empty()) return false;
  journal_.pop_back();
  current_ = replay(base_, journal_);
  return true;
}

void Session::restore(const std::vector<Resolution>& journal) {
  current_ = replay(base_, journal);
  journal_ = journal;
  skipped_.clear();
}

}  // namespace depprof::dedup
