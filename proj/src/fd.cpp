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

#include "depprof/fd.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_map>

#include "depprof/errors.hpp"
#include "depprof/parallel.hpp"

namespace depprof {

bool FDSet::contains(const FD& fd) const {
  return std::binary_search(fds.begin(), fds.end(), fd);
}

std::string render_fd(const FD& fd, const std::vector<std::string>& names) {
  std::string out = "[";
  for (std::size_t i = 0; i < fd.lhs.size(); ++i) {
    if (i) out += ", ";
    out += names.at(fd.lhs[i]);
  }
  out += "] -> ";
  out += names.at(fd.rhs);
  return out;
}

bool fd_holds(const Relation& relation, const FD& fd, NullSemantics nulls) {
  const std::size_t m = relation.attribute_count();
  if (fd.rhs >= m) throw InvalidArgument("rhs attribute out of range");
  for (AttrIndex a : fd.lhs) {
    if (a >= m) throw InvalidArgument("lhs attribute out of range");
  }
  StrippedPartition lhs = build_pli(relation, fd.lhs, nulls);
  StrippedPartition both = intersect_pli(lhs, build_pli(relation, fd.rhs, nulls));
  return partition_error(lhs) == partition_error(both);
}

namespace {

using Mask = std::uint64_t;

AttrSet to_attrs(Mask mask) {
  AttrSet out;
  while (mask) {
    out.push_back(static_cast<AttrIndex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

struct Node {
  Mask attrs = 0;
  Mask rhs_candidates = 0;  // C+(X)
  std::uint64_t error = 0;  // e(X)
};

// One lattice level. Nodes are kept in lexicographic order of their sorted
// attribute lists so that nodes sharing a prefix are contiguous.
struct Level {
  std::vector<Node> nodes;
  std::vector<StrippedPartition> partitions;
  std::unordered_map<Mask, std::size_t> index;

  void reindex() {
    index.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i].attrs, i);
  }
  const Node* find(Mask m) const {
    auto it = index.find(m);
    return it == index.end() ? nullptr : &nodes[it->second];
  }
};

Mask highest_bit(Mask m) { return Mask{1} << (63 - std::countl_zero(m)); }

// Fills C+(X) from the previous level and emits the FDs (X\A) -> A that hold.
void compute_dependencies(Level& level, const Level& prev, Mask all, unsigned threads,
                          std::vector<std::vector<FD>>& found) {
  found.assign(level.nodes.size(), {});
  parallel_for(level.nodes.size(), threads, [&](std::size_t i) {
    Node& x = level.nodes[i];
    Mask cplus = all;
    for (Mask rest = x.attrs; rest; rest &= rest - 1) {
      const Mask a = rest & -rest;
      const Node* parent = prev.find(x.attrs & ~a);
      cplus &= parent ? parent->rhs_candidates : 0;
    }
    for (Mask cand = x.attrs & cplus; cand; cand &= cand - 1) {
      const Mask a = cand & -cand;
      const Node* parent = prev.find(x.attrs & ~a);
      if (parent && parent->error == x.error) {
        found[i].push_back(FD{to_attrs(x.attrs & ~a), static_cast<AttrIndex>(std::countr_zero(a))});
        cplus &= ~a;
        cplus &= x.attrs;
      }
    }
    x.rhs_candidates = cplus;
  });
}

void prune(Level& level) {
  std::vector<Node> kept_nodes;
  std::vector<StrippedPartition> kept_parts;
  for (std::size_t i = 0; i < level.nodes.size(); ++i) {
    if (level.nodes[i].rhs_candidates == 0) continue;
    kept_nodes.push_back(level.nodes[i]);
    kept_parts.push_back(std::move(level.partitions[i]));
  }
  level.nodes = std::move(kept_nodes);
  level.partitions = std::move(kept_parts);
  level.reindex();
}

// Apriori-style join: X ∪ Y for X, Y sharing all but their last attribute,
// kept only if every immediate subset survived pruning.
Level generate_next(const Level& level, unsigned threads) {
  struct Pending {
    Mask attrs;
    std::size_t left, right;
  };
  std::vector<Pending> pending;
  const auto& nodes = level.nodes;
  std::size_t block = 0;
  while (block < nodes.size()) {
    const Mask prefix = nodes[block].attrs & ~highest_bit(nodes[block].attrs);
    std::size_t end = block + 1;
    while (end < nodes.size() && (nodes[end].attrs & ~highest_bit(nodes[end].attrs)) == prefix) ++end;
    for (std::size_t i = block; i < end; ++i) {
      for (std::size_t j = i + 1; j < end; ++j) {
        const Mask joined = nodes[i].attrs | nodes[j].attrs;
        bool all_present = true;
        for (Mask rest = joined; rest && all_present; rest &= rest - 1) {
          all_present = level.index.contains(joined & ~(rest & -rest));
        }
        if (all_present) pending.push_back({joined, i, j});
      }
    }
    block = end;
  }

  Level next;
  next.nodes.resize(pending.size());
  next.partitions.resize(pending.size());
  parallel_for(pending.size(), threads, [&](std::size_t k) {
    const Pending& p = pending[k];
    next.partitions[k] = intersect_pli(level.partitions[p.left], level.partitions[p.right]);
    next.nodes[k].attrs = p.attrs;
    next.nodes[k].error = partition_error(next.partitions[k]);
  });
  next.reindex();
  return next;
}

}  // namespace

FDSet discover_fds(const Relation& relation, const DiscoveryOptions& options) {
  const std::size_t m = relation.attribute_count();
  if (m == 0) throw InvalidArgument("relation has no columns");
  if (m > 64) throw InvalidArgument("discovery supports at most 64 columns");
  if (options.max_lhs < 1) throw InvalidArgument("max_lhs must be at least 1");

  const Mask all = m == 64 ? ~Mask{0} : (Mask{1} << m) - 1;
  const unsigned threads = std::max(1u, options.threads);

  Level prev;
  {
    Node empty;
    empty.attrs = 0;
    empty.rhs_candidates = all;
    StrippedPartition universal = build_universal_pli(relation.row_count());
    empty.error = partition_error(universal);
    prev.nodes.push_back(empty);
    prev.partitions.push_back(std::move(universal));
    prev.reindex();
  }

  Level level;
  level.nodes.resize(m);
  level.partitions.resize(m);
  parallel_for(m, threads, [&](std::size_t a) {
    level.partitions[a] = build_pli(relation, a, options.nulls);
    level.nodes[a].attrs = Mask{1} << a;
    level.nodes[a].error = partition_error(level.partitions[a]);
  });
  level.reindex();

  FDSet result;
  result.schema = relation.attribute_names();
  std::vector<std::vector<FD>> found;
  // A node of size L tests lhs of size L-1, so the lattice goes one level
  // past max_lhs.
  for (std::size_t size = 1; !level.nodes.empty(); ++size) {
    throw_if_cancelled(options.stop);
    compute_dependencies(level, prev, all, threads, found);
    for (auto& per_node : found) {
      for (auto& fd : per_node) result.fds.push_back(std::move(fd));
    }
    if (size == options.max_lhs + 1) break;
    prune(level);
    Level next = generate_next(level, threads);
    // Partitions of `level` are no longer needed once its children exist.
    level.partitions.clear();
    prev = std::move(level);
    level = std::move(next);
  }
  std::sort(result.fds.begin(), result.fds.end());
  return result;
}

}  // namespace depprof
