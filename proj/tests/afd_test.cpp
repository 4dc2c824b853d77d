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

#include "depprof/afd.hpp"
#include "depprof/errors.hpp"
#include "oracles.hpp"

using namespace depprof;

namespace {

// rows [(1,a),(1,b),(2,c)]: the only violating pair is (0,1) out of 3.
Relation one_third_fixture() { return load_csv("k,v\n1,a\n1,b\n2,c\n"); }

}  // namespace

TEST(Rational, ParsesExactly) {
  EXPECT_EQ(Rational::parse("0.1"), Rational(1, 10));
  EXPECT_EQ(Rational::parse("1/3"), Rational(1, 3));
  EXPECT_EQ(Rational::parse("2"), Rational(2, 1));
  EXPECT_EQ(Rational::parse("5e-2"), Rational(1, 20));
  EXPECT_EQ(Rational::parse(".25"), Rational(1, 4));
  EXPECT_THROW(Rational::parse("-1"), InvalidArgument);
  EXPECT_THROW(Rational::parse("abc"), InvalidArgument);
  EXPECT_THROW(Rational::parse("1/0"), InvalidArgument);
  EXPECT_LT(Rational(1, 3), Rational::parse("0.34"));
  EXPECT_GT(Rational(1, 3), Rational::parse("0.3"));
}

TEST(G1Error, Examples) {
  Relation r = one_third_fixture();
  EXPECT_EQ(g1_error(r, {{0}, 1}), Rational(1, 3));
  EXPECT_EQ(oracle::g1(oracle::raw_table(r), {0}, 1), Rational(1, 3));

  Relation exact = load_csv("k,v\n1,a\n1,a\n2,b\n");
  EXPECT_EQ(g1_error(exact, {{0}, 1}), Rational(0, 1));

  Relation worst = load_csv("k,v\n1,a\n1,b\n1,c\n1,d\n");
  EXPECT_EQ(g1_error(worst, {{0}, 1}), Rational(1, 1));
}

TEST(G1Error, DegenerateRelations) {
  Relation one = load_csv("k,v\n1,a\n");
  EXPECT_TRUE(g1_degenerate(one));
  EXPECT_EQ(g1_error(one, {{0}, 1}), Rational{});
  EXPECT_THROW(g1_error(one, {{1}, 1}), InvalidArgument);
}

TEST(G1Error, PartitionRouteEqualsPairEnumeration) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    Relation r = oracle::random_relation(rng, 4, 120, trial % 2 ? 8 : 0);
    const auto table = oracle::raw_table(r);
    const std::size_t m = r.attribute_count();
    for (const auto& lhs : oracle::subsets_up_to(m, 2)) {
      for (AttrIndex rhs = 0; rhs < m; ++rhs) {
        if (std::binary_search(lhs.begin(), lhs.end(), rhs)) continue;
        ASSERT_EQ(g1_error(r, {lhs, rhs}), oracle::g1(table, lhs, rhs));
      }
    }
  }
}

TEST(G1Error, MonotoneUnderLhsGrowth) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    Relation r = oracle::random_relation(rng, 5, 50);
    const std::size_t m = r.attribute_count();
    if (m < 3) continue;
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    AttrIndex rhs = pick(rng), x = pick(rng), b = pick(rng);
    if (x == rhs || b == rhs || b == x) continue;
    EXPECT_GE(g1_error(r, {{x}, rhs}), g1_error(r, {{std::min(x, b), std::max(x, b)}, rhs}));
    EXPECT_GE(g1_error(r, {{}, rhs}), g1_error(r, {{x}, rhs}));
  }
}

TEST(DiscoverAfds, ZeroThresholdEqualsExactDiscovery) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    Relation r = oracle::random_relation(rng, 6, 30);
    std::vector<FD> afd_fds;
    for (const AFD& afd : discover_afds(r, Rational{}, {.max_lhs = 3})) {
      EXPECT_EQ(afd.error, Rational{});
      afd_fds.push_back(afd.fd);
    }
    EXPECT_EQ(afd_fds, discover_fds(r, {.max_lhs = 3}).fds);
  }
}

TEST(DiscoverAfds, ThresholdOneGivesEmptyLhsEverywhere) {
  Relation r = load_csv("a,b,c\n1,x,p\n2,y,p\n3,x,q\n");
  auto afds = discover_afds(r, Rational(1, 1), {.max_lhs = 2});
  ASSERT_EQ(afds.size(), 3u);
  for (AttrIndex a = 0; a < 3; ++a) {
    EXPECT_TRUE(afds[a].fd.lhs.empty());
    EXPECT_EQ(afds[a].fd.rhs, a);
  }
}

TEST(DiscoverAfds, EqualsExhaustiveOracle) {
  std::mt19937_64 rng(24);
  const Rational threshold = Rational::parse("0.1");
  for (int trial = 0; trial < 80; ++trial) {
    Relation r = oracle::random_relation(rng, 5, 25);
    const std::size_t max_lhs = 1 + trial % 3;
    ASSERT_EQ(discover_afds(r, threshold, {.max_lhs = max_lhs}),
              oracle::minimal_afds(r, threshold, max_lhs))
        << "trial " << trial;
  }
}

TEST(DiscoverAfds, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 15; ++trial) {
    Relation r = oracle::random_relation(rng, 6, 40);
    EXPECT_EQ(discover_afds(r, Rational(1, 5), {.max_lhs = 3, .threads = 1}),
              discover_afds(r, Rational(1, 5), {.max_lhs = 3, .threads = 3}));
  }
}

TEST(SingleAttributeAfds, Examples) {
  Relation copies = load_csv("a,b,c\n1,1,x\n2,2,x\n2,2,y\n");
  auto lists = single_attribute_afds(copies, Rational{});
  EXPECT_NE(std::find(lists[0].begin(), lists[0].end(), 1), lists[0].end());
  EXPECT_NE(std::find(lists[1].begin(), lists[1].end(), 0), lists[1].end());

  Relation keyed = load_csv("id,b,c\n1,x,p\n2,x,q\n3,y,q\n");
  EXPECT_EQ(single_attribute_afds(keyed, Rational{})[0], (std::vector<AttrIndex>{1, 2}));

  auto third = single_attribute_afds(one_third_fixture(), Rational::parse("0.3"));
  EXPECT_TRUE(third[0].empty());
  auto looser = single_attribute_afds(one_third_fixture(), Rational(1, 3));
  EXPECT_EQ(looser[0], (std::vector<AttrIndex>{1}));
}
