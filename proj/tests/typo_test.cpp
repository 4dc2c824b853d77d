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

#include <limits>
#include <random>

#include "depprof/errors.hpp"
#include "depprof/typo.hpp"
#include "oracles.hpp"

using namespace depprof;
using namespace depprof::typo;

namespace {

Relation blue_fixture() { return load_csv("k,color\n1,blue\n1,blue\n1,bluee\n2,red\n"); }

ViolationCluster with_distances(const std::vector<double>& ds) {
  ViolationCluster c;
  c.central_value = "c";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    c.rows.push_back(static_cast<RowId>(i));
    c.members.push_back({static_cast<RowId>(i), "v" + std::to_string(i), ds[i]});
  }
  return c;
}

// Group g -> word for 6 groups of 5 rows; one row per listed index gets an
// extra trailing letter.
Relation perturbed_table(const std::vector<std::size_t>& flipped) {
  const std::vector<std::string> words{"red", "green", "blue", "cyan", "amber", "violet"};
  std::vector<std::vector<std::optional<std::string>>> rows;
  for (std::size_t i = 0; i < 30; ++i) {
    std::string w = words[i % 6];
    if (std::find(flipped.begin(), flipped.end(), i) != flipped.end()) w += "x";
    rows.push_back({std::to_string(i % 6), w, std::to_string(i)});
  }
  return make_relation({"g", "word", "id"}, rows);
}

}  // namespace

TEST(MineAlmostFds, ZeroThresholdExcludesEverything) {
  TypoConfig cfg;
  cfg.threshold = Rational{};
  EXPECT_TRUE(mine_almost_fds(blue_fixture(), cfg).empty());
}

TEST(MineAlmostFds, FindsSinglePerturbation) {
  Relation r = perturbed_table({7});
  // Perturbation oracle: row 7 sits in a group of 5, so it disagrees with the
  // 4 other rows of that group and with nobody else.
  const Rational induced(4, 30 * 29 / 2);
  EXPECT_EQ(oracle::g1(oracle::raw_table(r), {0}, 1), induced);
  TypoConfig cfg;
  cfg.threshold = Rational(1, 2);
  auto afds = mine_almost_fds(r, cfg);
  auto it = std::find_if(afds.begin(), afds.end(), [](const AFD& a) { return a.fd == FD{{0}, 1}; });
  ASSERT_NE(it, afds.end());
  EXPECT_EQ(it->error, induced);
}

TEST(MineAlmostFds, IndependentColumnsYieldNothingNearZero) {
  std::mt19937_64 rng(41);
  std::vector<std::vector<std::optional<std::string>>> rows;
  std::uniform_int_distribution<int> v(0, 3);
  for (int i = 0; i < 25; ++i) {
    rows.push_back({std::to_string(v(rng)), std::to_string(v(rng)), std::to_string(v(rng))});
  }
  Relation r = make_relation({"a", "b", "c"}, rows);
  TypoConfig cfg;
  cfg.threshold = Rational(1, 1000);
  cfg.max_lhs = 2;
  std::vector<AFD> expected;
  for (auto& afd : oracle::minimal_afds(r, cfg.threshold, cfg.max_lhs)) {
    if (afd.error > Rational{}) expected.push_back(afd);
  }
  EXPECT_TRUE(expected.empty());
  EXPECT_EQ(mine_almost_fds(r, cfg), expected);
}

TEST(ViolationClusters, BlueExample) {
  auto clusters = violation_clusters(blue_fixture(), {{0}, 1});
  ASSERT_EQ(clusters.size(), 1u);
  const auto& c = clusters[0];
  EXPECT_EQ(c.central_value, "blue");
  EXPECT_EQ(c.central_frequency, 2u);
  EXPECT_EQ(c.rows, (std::vector<RowId>{0, 1, 2}));
  ASSERT_EQ(c.members.size(), 3u);
  EXPECT_EQ(c.members[0].distance, 0.0);
  EXPECT_EQ(c.members[1].distance, 0.0);
  EXPECT_EQ(c.members[2].distance, static_cast<double>(oracle::edit_distance("bluee", "blue")));
  EXPECT_EQ(c.lhs_value, (std::vector<std::optional<std::string>>{"1"}));
}

TEST(ViolationClusters, EmptyWhenFdHoldsOrLhsUnique) {
  EXPECT_TRUE(violation_clusters(load_csv("k,v\n1,a\n1,a\n2,b\n"), {{0}, 1}).empty());
  EXPECT_TRUE(violation_clusters(load_csv("k,v\n1,a\n2,b\n3,b\n"), {{0}, 1}).empty());
}

TEST(ViolationClusters, TieGoesToFirstOccurrence) {
  auto clusters = violation_clusters(load_csv("k,v\n1,beta\n1,alpha\n1,alpha\n1,beta\n"), {{0}, 1});
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].central_value, "beta");
}

TEST(ViolationClusters, NumericRhsUsesAbsoluteDifference) {
  auto clusters = violation_clusters(load_csv("k,v\n1,10\n1,10\n1,13.5\n"), {{0}, 1});
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_DOUBLE_EQ(clusters[0].members[2].distance, 3.5);
}

TEST(FilterClusters, LiteralPredicate) {
  TypoConfig cfg;
  cfg.radius = 2;
  cfg.ratio = 0.8;
  auto c = with_distances({0, 0, 1, 7});
  EXPECT_DOUBLE_EQ(inside_share(c, 2), 0.75);
  EXPECT_EQ(filter_clusters({c}, cfg).size(), 1u);

  cfg.ratio = 0.5;
  EXPECT_TRUE(filter_clusters({with_distances({0, 0, 0})}, cfg).empty());

  cfg.ratio = 1.0;
  EXPECT_EQ(filter_clusters({c}, cfg).size(), 1u);
  EXPECT_TRUE(filter_clusters({with_distances({0, 1})}, cfg).empty());
}

TEST(FilterClusters, InvertFlipsPredicate) {
  TypoConfig cfg;
  cfg.radius = 2;
  cfg.ratio = 0.8;
  cfg.invert_display = true;
  EXPECT_TRUE(filter_clusters({with_distances({0, 0, 1, 7})}, cfg).empty());
  EXPECT_EQ(filter_clusters({with_distances({0, 0, 1})}, cfg).size(), 1u);
}

TEST(FilterClusters, BoundaryKnobs) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> d(0, 10);
  std::vector<ViolationCluster> clusters;
  for (int i = 0; i < 30; ++i) clusters.push_back(with_distances({0, d(rng), d(rng), d(rng)}));
  TypoConfig cfg;
  cfg.ratio = 0.0;
  EXPECT_TRUE(filter_clusters(clusters, cfg).empty());
  cfg.ratio = 0.9;
  cfg.radius = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(filter_clusters(clusters, cfg).empty());
  // Displayed clusters are always drawn from the input.
  cfg.radius = 3;
  for (const auto& shown : filter_clusters(clusters, cfg)) {
    EXPECT_TRUE(std::any_of(clusters.begin(), clusters.end(),
                            [&](const auto& c) { return c.members[1].distance == shown.members[1].distance; }));
  }
}

TEST(ProposeFixes, RadiusBoundsSuggestions) {
  ViolationCluster c;
  c.central_value = "blue";
  c.members = {{0, "blue", 0}, {1, "bluee", 1}, {2, "red", 7}};
  EXPECT_EQ(propose_fixes(c, 2), (std::vector<Fix>{{1, "bluee", "blue"}}));
  EXPECT_TRUE(propose_fixes(c, 0.5).empty());
}

TEST(ProposeFixes, ApplyingFixesRestoresExactFd) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<std::size_t> pick(0, 29);
  for (int trial = 0; trial < 20; ++trial) {
    // Perturb at most one row per group so the mode stays the true word.
    std::vector<std::size_t> flipped;
    std::set<std::size_t> groups;
    for (int i = 0; i < 3; ++i) {
      std::size_t row = pick(rng);
      if (groups.insert(row % 6).second) flipped.push_back(row);
    }
    Relation r = perturbed_table(flipped);
    ASSERT_GT(g1_error(r, {{0}, 1}), Rational{});

    std::map<RowId, std::string> edits;
    for (const auto& c : violation_clusters(r, {{0}, 1})) {
      for (const auto& fix : propose_fixes(c, 2)) edits[fix.row] = fix.suggested;
    }
    std::vector<std::vector<std::optional<std::string>>> rows;
    for (std::size_t i = 0; i < r.row_count(); ++i) {
      rows.push_back({r.text(i, 0), edits.contains(static_cast<RowId>(i)) ? edits[static_cast<RowId>(i)] : r.text(i, 1),
                      r.text(i, 2)});
    }
    EXPECT_EQ(g1_error(make_relation({"g", "word", "id"}, rows), {{0}, 1}), Rational{});
  }
}

TEST(TypoConfig, Validation) {
  TypoConfig cfg;
  cfg.ratio = 1.5;
  EXPECT_THROW(validate(cfg), InvalidArgument);
  cfg.ratio = 0.5;
  cfg.radius = -1;
  EXPECT_THROW(validate(cfg), InvalidArgument);
}
