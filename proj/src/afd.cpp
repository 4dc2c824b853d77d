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

#include "depprof/afd.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "depprof/errors.hpp"
#include "depprof/parallel.hpp"

namespace depprof {

std::uint64_t violating_pairs(const StrippedPartition& lhs, const Column& rhs, NullSemantics nulls) {
  std::vector<std::uint32_t> counts(rhs.values.size(), 0);
  std::vector<ValueId> touched;
  std::uint64_t violating = 0;
  for (const auto& cluster : lhs.clusters) {
    const std::uint64_t s = cluster.size();
    std::uint64_t agreeing = 0;
    for (RowId r : cluster) {
      const ValueId v = rhs.codes[r];
      if (v == kNullId && nulls == NullSemantics::kDistinct) continue;
      if (counts[v] == 0) touched.push_back(v);
      // Each new row with value v agrees with the counts[v] rows seen before it.
      agreeing += counts[v]++;
    }
    for (ValueId v : touched) counts[v] = 0;
    touched.clear();
    violating += s * (s - 1) / 2 - agreeing;
  }
  return violating;
}

namespace {

std::uint64_t total_pairs(std::size_t n) {
  return static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

Rational g1_from(std::uint64_t violating, std::size_t n) {
  if (n < 2) return Rational{};
  return Rational(violating, total_pairs(n));
}

void check_fd(const Relation& relation, const FD& fd) {
  const std::size_t m = relation.attribute_count();
  if (fd.rhs >= m) throw InvalidArgument("rhs attribute out of range");
  for (AttrIndex a : fd.lhs) {
    if (a >= m) throw InvalidArgument("lhs attribute out of range");
    if (a == fd.rhs) throw InvalidArgument("rhs attribute appears in lhs");
  }
}

using Mask = std::uint64_t;

AttrSet to_attrs(Mask mask) {
  AttrSet out;
  while (mask) {
    out.push_back(static_cast<AttrIndex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

Mask highest_bit(Mask m) { return Mask{1} << (63 - std::countl_zero(m)); }

struct Node {
  Mask attrs = 0;
  Mask open = 0;  // rhs attributes with no threshold-meeting lhs inside attrs
  StrippedPartition partition;
};

}  // namespace

Rational g1_error(const Relation& relation, const FD& fd, NullSemantics nulls) {
  check_fd(relation, fd);
  StrippedPartition lhs = build_pli(relation, fd.lhs, nulls);
  return g1_from(violating_pairs(lhs, relation.column(fd.rhs), nulls), relation.row_count());
}

std::vector<AFD> discover_afds(const Relation& relation, const Rational& threshold,
                               const DiscoveryOptions& options) {
  const std::size_t m = relation.attribute_count();
  const std::size_t n = relation.row_count();
  if (m == 0) throw InvalidArgument("relation has no columns");
  if (m > 64) throw InvalidArgument("discovery supports at most 64 columns");
  if (options.max_lhs < 1) throw InvalidArgument("max_lhs must be at least 1");
  const Mask all = m == 64 ? ~Mask{0} : (Mask{1} << m) - 1;
  const unsigned threads = std::max(1u, options.threads);

  std::vector<AFD> result;
  std::vector<std::vector<AFD>> found;

  // Tests every candidate rhs of every node; fills `open` and collects AFDs.
  auto evaluate = [&](std::vector<Node>& nodes, const std::vector<Mask>& candidates) {
    found.assign(nodes.size(), {});
    parallel_for(nodes.size(), threads, [&](std::size_t i) {
      Node& x = nodes[i];
      x.open = 0;
      for (Mask cand = candidates[i]; cand; cand &= cand - 1) {
        const AttrIndex a = static_cast<AttrIndex>(std::countr_zero(cand));
        const Rational err =
            g1_from(violating_pairs(x.partition, relation.column(a), options.nulls), n);
        if (err <= threshold) {
          found[i].push_back(AFD{FD{to_attrs(x.attrs), a}, err});
        } else {
          x.open |= cand & -cand;
        }
      }
    });
    for (auto& per_node : found) {
      for (auto& afd : per_node) result.push_back(std::move(afd));
    }
  };

  std::vector<Node> level(1);
  level[0].partition = build_universal_pli(n);
  evaluate(level, {all});

  for (std::size_t size = 1; size <= options.max_lhs; ++size) {
    throw_if_cancelled(options.stop);
    std::unordered_map<Mask, std::size_t> index;
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (level[i].open) index.emplace(level[i].attrs, i);
    }

    struct Pending {
      Mask attrs;
      Mask candidates;
      std::size_t left, right;  // right == npos: build from a single column
    };
    std::vector<Pending> pending;
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    if (size == 1) {
      for (AttrIndex a = 0; a < m; ++a) {
        const Mask bit = Mask{1} << a;
        const Mask cand = level[0].open & ~bit;
        if (cand) pending.push_back({bit, cand, a, npos});
      }
    } else {
      std::size_t block = 0;
      while (block < level.size()) {
        const Mask prefix = level[block].attrs & ~highest_bit(level[block].attrs);
        std::size_t end = block + 1;
        while (end < level.size() && (level[end].attrs & ~highest_bit(level[end].attrs)) == prefix) {
          ++end;
        }
        for (std::size_t i = block; i < end; ++i) {
          if (!level[i].open) continue;
          for (std::size_t j = i + 1; j < end; ++j) {
            if (!level[j].open) continue;
            const Mask joined = level[i].attrs | level[j].attrs;
            Mask cand = all & ~joined;
            for (Mask rest = joined; rest && cand; rest &= rest - 1) {
              auto it = index.find(joined & ~(rest & -rest));
              cand &= it == index.end() ? 0 : level[it->second].open;
            }
            if (cand) pending.push_back({joined, cand, i, j});
          }
        }
        block = end;
      }
    }

    std::vector<Node> next(pending.size());
    std::vector<Mask> candidates(pending.size());
    parallel_for(pending.size(), threads, [&](std::size_t k) {
      const Pending& p = pending[k];
      next[k].attrs = p.attrs;
      candidates[k] = p.candidates;
      next[k].partition =
          p.right == npos ? build_pli(relation, p.left, options.nulls)
                          : intersect_pli(level[p.left].partition, level[p.right].partition);
    });
    evaluate(next, candidates);
    level = std::move(next);
    if (level.empty()) break;
  }

  std::sort(result.begin(), result.end(), [](const AFD& a, const AFD& b) { return a.fd < b.fd; });
  return result;
}

std::map<AttrIndex, std::vector<AttrIndex>> single_attribute_afds(const Relation& relation,
                                                                  const Rational& threshold,
                                                                  NullSemantics nulls) {
  const std::size_t m = relation.attribute_count();
  const std::size_t n = relation.row_count();
  std::map<AttrIndex, std::vector<AttrIndex>> out;
  for (AttrIndex i = 0; i < m; ++i) {
    auto& list = out[i];
    const StrippedPartition lhs = build_pli(relation, i, nulls);
    for (AttrIndex j = 0; j < m; ++j) {
      if (j == i) continue;
      if (g1_from(violating_pairs(lhs, relation.column(j), nulls), n) <= threshold) list.push_back(j);
    }
  }
  return out;
}

}  // namespace depprof
