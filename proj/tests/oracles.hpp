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

// Brute-force reference implementations used by the tests. Nothing here goes
// through partitions: everything is plain pairwise enumeration over the raw
// cell strings, so it stays independent of the engine code it checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "depprof/afd.hpp"
#include "depprof/fd.hpp"
#include "depprof/relation.hpp"

namespace oracle {

using depprof::AttrIndex;
using depprof::AttrSet;
using depprof::Relation;

using Cell = std::optional<std::string>;
using Table = std::vector<std::vector<Cell>>;

inline Table raw_table(const Relation& r) {
  Table t(r.row_count(), std::vector<Cell>(r.attribute_count()));
  for (std::size_t i = 0; i < r.row_count(); ++i) {
    for (std::size_t a = 0; a < r.attribute_count(); ++a) {
      if (!r.is_null(i, a)) t[i][a] = r.text(i, a);
    }
  }
  return t;
}

// Null equals null, as in the engine default.
inline bool agree(const Table& t, std::size_t i, std::size_t j, const AttrSet& attrs) {
  for (AttrIndex a : attrs) {
    if (t[i][a] != t[j][a]) return false;
  }
  return true;
}

inline bool holds(const Table& t, const AttrSet& lhs, AttrIndex rhs) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (agree(t, i, j, lhs) && t[i][rhs] != t[j][rhs]) return false;
    }
  }
  return true;
}

inline std::uint64_t violating_pairs(const Table& t, const AttrSet& lhs, AttrIndex rhs) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (agree(t, i, j, lhs) && t[i][rhs] != t[j][rhs]) ++v;
    }
  }
  return v;
}

inline depprof::Rational g1(const Table& t, const AttrSet& lhs, AttrIndex rhs) {
  const std::uint64_t n = t.size();
  if (n < 2) return {};
  return depprof::Rational(violating_pairs(t, lhs, rhs), n * (n - 1) / 2);
}

/// All subsets of {0..m-1} with at most k elements, each sorted.
inline std::vector<AttrSet> subsets_up_to(std::size_t m, std::size_t k) {
  std::vector<AttrSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > k) continue;
    AttrSet s;
    for (std::size_t a = 0; a < m; ++a) {
      if (mask >> a & 1) s.push_back(a);
    }
    out.push_back(s);
  }
  return out;
}

inline bool proper_subset(const AttrSet& a, const AttrSet& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Minimal holding FDs with |lhs| <= max_lhs, in canonical order.
inline std::vector<depprof::FD> minimal_fds(const Relation& r, std::size_t max_lhs) {
  const Table t = raw_table(r);
  const std::size_t m = r.attribute_count();
  const auto sets = subsets_up_to(m, max_lhs);
  std::vector<depprof::FD> out;
  for (AttrIndex rhs = 0; rhs < m; ++rhs) {
    for (const auto& lhs : sets) {
      if (std::binary_search(lhs.begin(), lhs.end(), rhs)) continue;
      if (!holds(t, lhs, rhs)) continue;
      bool minimal = true;
      for (const auto& sub : sets) {
        if (proper_subset(sub, lhs) && holds(t, sub, rhs)) {
          minimal = false;
          break;
        }
      }
      if (minimal) out.push_back({lhs, rhs});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Minimal AFDs under the inclusive threshold, in canonical order.
inline std::vector<depprof::AFD> minimal_afds(const Relation& r, const depprof::Rational& threshold,
                                              std::size_t max_lhs) {
  const Table t = raw_table(r);
  const std::size_t m = r.attribute_count();
  const auto sets = subsets_up_to(m, max_lhs);
  std::vector<depprof::AFD> out;
  for (AttrIndex rhs = 0; rhs < m; ++rhs) {
    for (const auto& lhs : sets) {
      if (std::binary_search(lhs.begin(), lhs.end(), rhs)) continue;
      const auto err = g1(t, lhs, rhs);
      if (err > threshold) continue;
      bool minimal = true;
      for (const auto& sub : sets) {
        if (proper_subset(sub, lhs) && g1(t, sub, rhs) <= threshold) {
          minimal = false;
          break;
        }
      }
      if (minimal) out.push_back({{lhs, rhs}, err});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.fd < b.fd; });
  return out;
}

/// Rows grouped by identical tuples on attrs; groups of size >= 2, canonical order.
inline std::vector<std::vector<depprof::RowId>> groups(const Relation& r, const AttrSet& attrs) {
  const Table t = raw_table(r);
  std::map<std::vector<Cell>, std::vector<depprof::RowId>> by_key;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<Cell> key;
    for (AttrIndex a : attrs) key.push_back(t[i][a]);
    by_key[key].push_back(static_cast<depprof::RowId>(i));
  }
  std::vector<std::vector<depprof::RowId>> out;
  for (auto& [k, rows] : by_key) {
    if (rows.size() >= 2) out.push_back(rows);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Textbook full-matrix edit distance.
inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[a.size()][b.size()];
}

/// Random table with small value domains; some columns are derived from
/// others so that non-trivial dependencies show up.
inline Relation random_relation(std::mt19937_64& rng, std::size_t max_attrs, std::size_t max_rows,
                                int null_percent = 0) {
  std::uniform_int_distribution<std::size_t> attrs_d(1, max_attrs);
  std::uniform_int_distribution<std::size_t> rows_d(0, max_rows);
  const std::size_t m = attrs_d(rng);
  const std::size_t n = rows_d(rng);
  std::vector<int> domain(m);
  std::vector<int> derived_from(m, -1);
  for (std::size_t a = 0; a < m; ++a) {
    domain[a] = std::uniform_int_distribution<int>(1, 6)(rng);
    if (a > 0 && std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
      derived_from[a] = std::uniform_int_distribution<int>(0, static_cast<int>(a) - 1)(rng);
    }
  }
  std::vector<std::string> names;
  for (std::size_t a = 0; a < m; ++a) names.push_back("a" + std::to_string(a));
  std::vector<std::vector<std::optional<std::string>>> rows(n, std::vector<std::optional<std::string>>(m));
  std::uniform_int_distribution<int> pct(0, 99);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> raw(m);
    for (std::size_t a = 0; a < m; ++a) {
      if (derived_from[a] >= 0) {
        raw[a] = (raw[derived_from[a]] * 7 + 3) % domain[a];
      } else {
        raw[a] = std::uniform_int_distribution<int>(0, domain[a] - 1)(rng);
      }
      if (null_percent > 0 && pct(rng) < null_percent) {
        rows[i][a] = std::nullopt;
      } else {
        rows[i][a] = "v" + std::to_string(raw[a]);
      }
    }
  }
  return depprof::make_relation(names, rows);
}

}  // namespace oracle
