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

#include <cmath>
#include <random>

#include "depprof/anomaly.hpp"
#include "depprof/errors.hpp"
#include "oracles.hpp"

using namespace depprof;
using namespace depprof::anomaly;

namespace {

FDSet set_of(std::vector<FD> fds, std::vector<std::string> schema = {"A", "B", "C"}) {
  std::sort(fds.begin(), fds.end());
  return {fds, schema, ""};
}

Relation one_third_fixture() { return load_csv("k,v\n1,a\n1,b\n2,c\n"); }
Relation diameter_fixture() { return load_csv("g,v\na,3\na,5\na,9\nb,100\n"); }

}  // namespace

TEST(FdDiff, Examples) {
  const FD ab{{0}, 1};
  const FD cb{{2}, 1};
  EXPECT_EQ(fd_diff(set_of({ab}), set_of({ab})), FDDiff{});
  EXPECT_EQ(fd_diff(set_of({ab}), set_of({})), (FDDiff{{ab}, {}}));
  EXPECT_EQ(fd_diff(set_of({ab}), set_of({ab, cb})), (FDDiff{{}, {cb}}));
  EXPECT_THROW(fd_diff(set_of({ab}), set_of({ab}, {"A", "B", "D"})), InvalidArgument);
}

TEST(AfdProbe, Examples) {
  Relation exact = load_csv("k,v\n1,a\n1,a\n2,b\n");
  auto held = afd_probe(exact, {{0}, 1}, {Rational(1, 10), Rational(1, 2)});
  EXPECT_EQ(held.g1, Rational{});
  EXPECT_EQ(held.first_holding, Rational(1, 10));

  auto miss = afd_probe(one_third_fixture(), {{0}, 1}, {Rational::parse("0.1"), Rational::parse("0.2")});
  EXPECT_EQ(miss.g1, Rational(1, 3));
  EXPECT_FALSE(miss.first_holding);

  auto hit = afd_probe(one_third_fixture(), {{0}, 1}, {Rational::parse("0.1"), Rational::parse("0.5")});
  EXPECT_EQ(hit.first_holding, Rational(1, 2));

  EXPECT_THROW(afd_probe(exact, {{0}, 1}, {Rational(1, 2), Rational(1, 10)}), InvalidArgument);
}

TEST(MfdSweep, Examples) {
  Relation r = diameter_fixture();
  auto found = mfd_sweep(r, {{0}, 1}, {10, 1, Metric::kEuclidean});
  ASSERT_TRUE(found.p);
  EXPECT_EQ(*found.p, 6.0);
  EXPECT_TRUE(found.verdict.holds);

  auto missing = mfd_sweep(r, {{0}, 1}, {5, 1, Metric::kEuclidean});
  EXPECT_FALSE(missing.p);
  EXPECT_FALSE(missing.diagnostic.empty());

  Relation exact = load_csv("g,v\na,3\na,3\nb,7\n");
  auto first = mfd_sweep(exact, {{0}, 1}, {10, 2.5, Metric::kEuclidean});
  ASSERT_TRUE(first.p);
  EXPECT_EQ(*first.p, 2.5);
}

TEST(MfdSweep, NullsGiveDiagnostic) {
  Relation r = load_csv("g,v\na,3\na,\n");
  auto out = mfd_sweep(r, {{0}, 1}, {10, 1, Metric::kEuclidean});
  EXPECT_FALSE(out.p);
  EXPECT_NE(out.diagnostic.find("null"), std::string::npos);
}

TEST(MfdSweep, RejectsBadConfig) {
  Relation r = diameter_fixture();
  EXPECT_THROW(mfd_sweep(r, {{0}, 1}, {1, 2, Metric::kEuclidean}), InvalidArgument);
  EXPECT_THROW(mfd_sweep(r, {{0}, 1}, {5, 0, Metric::kEuclidean}), InvalidArgument);
  EXPECT_THROW(mfd_sweep(r, {{0}, 1}, {5, 1, Metric::kLevenshtein}), TypeMismatch);
}

TEST(MfdSweep, GridMinimality) {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> val(0, 40);
  std::uniform_real_distribution<double> step(0.3, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<std::optional<std::string>>> rows;
    for (int i = 0; i < 20; ++i) rows.push_back({std::to_string(i % 4), std::to_string(val(rng))});
    Relation r = make_relation({"g", "v"}, rows);
    SweepConfig cfg{60, step(rng), Metric::kEuclidean};
    auto out = mfd_sweep(r, {{0}, 1}, cfg);
    ASSERT_TRUE(out.p);
    MFDStatement stmt{{0}, {1}, Metric::kEuclidean, *out.p};
    EXPECT_TRUE(validate_mfd(r, stmt).holds);
    if (*out.p > cfg.step) {
      stmt.p = *out.p - cfg.step;
      EXPECT_FALSE(validate_mfd(r, stmt).holds);
    }
  }
}

TEST(SuggestSweepBound, Examples) {
  EXPECT_EQ(suggest_sweep_bound(load_csv("v\n4\n4\n4\n"), 0), 0.0);
  EXPECT_DOUBLE_EQ(suggest_sweep_bound(load_csv("v\n2\n4\n"), 0), 1.0);
  EXPECT_DOUBLE_EQ(suggest_sweep_bound(load_csv("v\n1\n2\n3\n4\n5\n"), 0), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(suggest_sweep_bound(load_csv("v\n2\n\n4\n"), 0), 1.0);
  EXPECT_THROW(suggest_sweep_bound(load_csv("v\nx\n"), 0), TypeMismatch);
}

TEST(AdvanceCanonical, Examples) {
  AnomalyState s;
  FDSet first = set_of({{{0}, 1}});
  AnomalyState a = advance_canonical(s, "p1", first, {});
  EXPECT_TRUE(a.canonical_mfds.empty());
  EXPECT_EQ(a.history.size(), 1u);
  EXPECT_EQ(a.canonical_fds.fds, first.fds);

  MFDStatement mfd{{0}, {1}, Metric::kEuclidean, 5};
  AnomalyState b = advance_canonical(a, "p2", set_of({}), {mfd});
  ASSERT_EQ(b.canonical_mfds.size(), 1u);
  EXPECT_EQ(b.canonical_mfds.back().p, 5.0);
  EXPECT_EQ(b.history.size(), 2u);
  EXPECT_EQ(b.history.back().diff.lost, first.fds);
  EXPECT_EQ(a.history.size(), 1u);
}

TEST(AdvanceCanonical, ReplayReconstructsCanonicalSet) {
  std::mt19937_64 rng(62);
  AnomalyState state;
  const std::vector<std::string> schema{"a0", "a1", "a2", "a3"};
  for (int step = 0; step < 25; ++step) {
    std::vector<FD> fds;
    for (const auto& lhs : oracle::subsets_up_to(4, 2)) {
      for (AttrIndex rhs = 0; rhs < 4; ++rhs) {
        if (!std::binary_search(lhs.begin(), lhs.end(), rhs) && rng() % 5 == 0) fds.push_back({lhs, rhs});
      }
    }
    state = advance_canonical(state, "p" + std::to_string(step), set_of(fds, schema), {});
    EXPECT_EQ(replay_history(state.history), state.canonical_fds.fds);
  }
}

TEST(ConcatRelations, StacksRows) {
  Relation joined = concat_relations({load_csv("a,b\n1,x\n"), load_csv("a,b\n2,y\n3,\n")});
  EXPECT_EQ(joined.row_count(), 3u);
  EXPECT_TRUE(joined.is_null(2, 1));
  EXPECT_THROW(concat_relations({load_csv("a\n1\n"), load_csv("b\n1\n")}), InvalidArgument);
}
