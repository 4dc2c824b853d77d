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

#include <gtest/gtest.h>

#include <random>

#include "depprof/dedup.hpp"
#include "oracles.hpp"

using namespace depprof;
using namespace depprof::dedup;

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

Relation people() {
  return load_csv(
      "id,name,city,zip\n"
      "1,Ann,Oslo,100\n"
      "2,Bob,Rome,200\n"
      "3,ann ,Oslo,100\n"
      "4,Cid,Rome,200\n");
}

}  // namespace

TEST(RankDedupKeys, OrdersByDependentCount) {
  // name -> {city, zip}, zip -> {city}; id is unique.
  Relation r = load_csv(
      "id,name,city,zip\n"
      "1,a,X,1\n"
      "2,a,X,1\n"
      "3,b,Y,2\n"
      "4,c,Y,2\n");
  auto keys = rank_dedup_keys(r, {.threshold = Rational{}});
  ASSERT_FALSE(keys.empty());
  EXPECT_EQ(keys[0].lhs, 0u);
  EXPECT_TRUE(keys[0].is_unique);
  EXPECT_EQ(keys[0].rhs_count, 3u);
  auto name = std::find_if(keys.begin(), keys.end(), [](const auto& k) { return k.lhs == 1; });
  auto zip = std::find_if(keys.begin(), keys.end(), [](const auto& k) { return k.lhs == 3; });
  ASSERT_NE(name, keys.end());
  ASSERT_NE(zip, keys.end());
  EXPECT_EQ(name->rhs_list, (std::vector<AttrIndex>{2, 3}));
  EXPECT_FALSE(name->is_unique);
  EXPECT_LT(name - keys.begin(), zip - keys.begin());

  auto without_id = rank_dedup_keys(r, {.threshold = Rational{}, .excluded_keys = {0}});
  EXPECT_TRUE(std::none_of(without_id.begin(), without_id.end(), [](const auto& k) { return k.lhs == 0; }));
}

TEST(SortForNeighborhood, Examples) {
  Relation sorted = load_csv("k\n1\n2\n3\n");
  EXPECT_EQ(sort_for_neighborhood(sorted, {0, {}, 0, true}), (std::vector<std::size_t>{0, 1, 2}));

  Relation reversed = load_csv("k\n3\n2\n1\n");
  EXPECT_EQ(sort_for_neighborhood(reversed, {0, {}, 0, true}), (std::vector<std::size_t>{2, 1, 0}));

  Relation twins = load_csv("k,v\nb,1\na,2\nb,1\n");
  auto perm = sort_for_neighborhood(twins, {0, {1}, 1, false});
  EXPECT_EQ(perm, (std::vector<std::size_t>{1, 0, 2}));

  Relation nulls = load_csv("k\n\n2\n1\n");
  EXPECT_EQ(sort_for_neighborhood(nulls, {0, {}, 0, false}), (std::vector<std::size_t>{2, 1, 0}));
}

TEST(WindowPairs, Examples) {
  EXPECT_EQ(window_pairs(4, 2), (Pairs{{0, 1}, {1, 2}, {2, 3}}));
  EXPECT_EQ(window_pairs(4, 3), (Pairs{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}));
  EXPECT_EQ(window_pairs(4, 9).size(), 6u);
  EXPECT_THROW(window_pairs(4, 1), InvalidArgument);
}

TEST(MatchPair, Examples) {
  Relation r = load_csv("a,b,c,d,e\n1,x,y,z,w\n1,x,y,z,w\n1,x,y,q,q\n");
  auto same = match_pair(r, 0, 1, 5);
  ASSERT_TRUE(same);
  EXPECT_EQ(same->match_count, 5u);
  EXPECT_TRUE(match_pair(r, 0, 2, 3));
  EXPECT_FALSE(match_pair(r, 0, 2, 4));

  Relation p = people();
  auto folded = match_pair(p, 0, 2, 1);
  ASSERT_TRUE(folded);
  EXPECT_EQ(folded->matched_attrs, (std::vector<AttrIndex>{1, 2, 3}));
}

TEST(MatchPair, NullsNeverMatch) {
  Relation r = load_csv("a,b\n,1\n,1\n");
  auto pair = match_pair(r, 0, 1, 1);
  ASSERT_TRUE(pair);
  EXPECT_EQ(pair->matched_attrs, (std::vector<AttrIndex>{1}));
}

TEST(FindDuplicates, FullWindowEqualsExhaustiveMatching) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    Relation r = oracle::random_relation(rng, 5, 60, 5);
    const std::size_t n = r.row_count();
    if (n < 2) continue;
    const std::size_t k = std::max<std::size_t>(1, r.attribute_count() - 1);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    auto stream = find_duplicates(r, perm, n, k);

    std::vector<DuplicatePair> exhaustive;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (auto p = match_pair(r, i, j, k)) exhaustive.push_back(*p);
      }
    }
    auto by_rows = [](const auto& a, const auto& b) { return std::tie(a.row_a, a.row_b) < std::tie(b.row_a, b.row_b); };
    std::sort(stream.begin(), stream.end(), by_rows);
    EXPECT_EQ(stream, exhaustive);
  }
}

TEST(ApplyResolution, Examples) {
  Relation r = people();
  Relation dropped = apply_resolution(r, {0, 2, 0, {}});
  EXPECT_EQ(dropped.row_count(), 3u);
  EXPECT_EQ(dropped.row_ids(), (std::vector<RowId>{0, 1, 3}));
  EXPECT_EQ(dropped.text(0, 1), "Ann");

  Relation copied = apply_resolution(r, {0, 2, 0, {1}});
  EXPECT_EQ(copied.text(0, 1), "ann ");
  EXPECT_EQ(copied.text(0, 2), "Oslo");
  EXPECT_EQ(copied.text(1, 1), "Bob");

  EXPECT_THROW(apply_resolution(dropped, {2, 3, 3, {}}), StaleResolution);
  EXPECT_THROW(apply_resolution(r, {0, 2, 1, {}}), InvalidArgument);
}

TEST(ApplyResolution, TouchesOnlyCopyAttributes) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    Relation r = oracle::random_relation(rng, 5, 20);
    if (r.row_count() < 2) continue;
    std::uniform_int_distribution<RowId> row(0, static_cast<RowId>(r.row_count() - 1));
    RowId a = row(rng), b = row(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    std::set<AttrIndex> copy;
    for (AttrIndex x = 0; x < r.attribute_count(); ++x) {
      if (rng() % 2) copy.insert(x);
    }
    Resolution res{a, b, a, copy};
    Relation out = apply_resolution(r, res);
    ASSERT_EQ(out.row_count(), r.row_count() - 1);
    const std::size_t kept = *out.find_row(a);
    for (AttrIndex x = 0; x < r.attribute_count(); ++x) {
      EXPECT_EQ(out.code(kept, x), copy.contains(x) ? r.code(b, x) : r.code(a, x));
    }
  }
}

TEST(Session, ProposeDecideUndo) {
  Relation r = load_csv("a,b\n1,x\n1,x\n1,x\n2,y\n");
  auto perm = sort_for_neighborhood(r, {0, {1}, 1, false});
  Session s(r, find_duplicates(r, perm, 3, 2));
  ASSERT_EQ(s.candidates().size(), 3u);

  auto first = s.propose();
  ASSERT_TRUE(first);
  EXPECT_EQ(std::pair(first->row_a, first->row_b), std::pair(RowId{0}, RowId{1}));
  EXPECT_THROW(s.decide({0, 2, 0, {}}), NotProposed);
  s.decide({0, 1, 0, {}});
  EXPECT_EQ(s.journal().size(), 1u);
  EXPECT_EQ(s.current().row_count(), 3u);

  // (0,2) is next; (1,2) refers to a removed row and is never proposed.
  auto second = s.propose();
  ASSERT_TRUE(second);
  EXPECT_EQ(std::pair(second->row_a, second->row_b), std::pair(RowId{0}, RowId{2}));
  EXPECT_THROW(s.decide({1, 2, 2, {}}), StaleResolution);

  EXPECT_TRUE(s.undo());
  EXPECT_TRUE(s.journal().empty());
  EXPECT_EQ(s.current().row_count(), 4u);
  EXPECT_FALSE(s.undo());

  s.skip();
  auto after_skip = s.propose();
  ASSERT_TRUE(after_skip);
  EXPECT_EQ(std::pair(after_skip->row_a, after_skip->row_b), std::pair(RowId{0}, RowId{2}));
  EXPECT_TRUE(s.journal().empty());
}

TEST(Session, RestoreReplaysJournal) {
  Relation r = load_csv("a,b\n1,x\n1,x\n1,x\n2,y\n");
  Session s(r, find_duplicates(r, sort_for_neighborhood(r, {0, {1}, 1, false}), 4, 2));
  s.decide({0, 1, 1, {}});
  Session t(r, s.candidates());
  t.restore(s.journal());
  EXPECT_EQ(to_csv(t.current()), to_csv(s.current()));
  EXPECT_EQ(t.current().row_ids(), s.current().row_ids());
}

TEST(DedupConfig, Validation) {
  Relation r = people();
  EXPECT_THROW(validate({.window = 1}, r), InvalidArgument);
  EXPECT_THROW(validate({.k = 9}, r), InvalidArgument);
  EXPECT_NO_THROW(validate({.window = 2, .k = 4}, r));
}
