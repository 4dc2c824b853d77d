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

#include "depprof/errors.hpp"
#include "depprof/mfd.hpp"
#include "oracles.hpp"

using namespace depprof;

namespace {

ValueTuple str(const std::string& s) { return {MetricValue{s}}; }
ValueTuple num(double v) { return {MetricValue{v}}; }

// One lhs class with rhs values {3, 5, 9} plus an unrelated singleton.
Relation diameter_fixture() { return load_csv("g,v\na,3\na,5\na,9\nb,100\n"); }

std::string random_word(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> ch('a', 'd');
  std::string s(len(rng), 'a');
  for (char& c : s) c = static_cast<char>(ch(rng));
  return s;
}

}  // namespace

TEST(Distance, Examples) {
  EXPECT_EQ(distance(str("abc"), str("abc"), Metric::kLevenshtein), 0.0);
  EXPECT_EQ(distance(num(4.5), num(4.5), Metric::kEuclidean), 0.0);
  EXPECT_EQ(distance(str("abc"), str(""), Metric::kLevenshtein), 3.0);
  EXPECT_EQ(oracle::edit_distance("kitten", "sitting"), 3u);
  EXPECT_EQ(distance(str("kitten"), str("sitting"), Metric::kLevenshtein), 3.0);
  ValueTuple a{MetricValue{0.0}, MetricValue{0.0}};
  ValueTuple b{MetricValue{3.0}, MetricValue{4.0}};
  EXPECT_EQ(distance(a, b, Metric::kEuclidean), 5.0);
}

TEST(Distance, RejectsNullsAndTypeMismatch) {
  ValueTuple null{MetricValue{}};
  EXPECT_THROW(distance(null, num(1), Metric::kEuclidean), InvalidArgument);
  EXPECT_THROW(distance(str("a"), str("b"), Metric::kEuclidean), TypeMismatch);
  EXPECT_THROW(distance(num(1), num(2), Metric::kLevenshtein), TypeMismatch);
}

TEST(Levenshtein, MatchesFullMatrixOracleAndMetricAxioms) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string a = random_word(rng, 8), b = random_word(rng, 8), c = random_word(rng, 8);
    const std::size_t ab = levenshtein(a, b);
    ASSERT_EQ(ab, oracle::edit_distance(a, b));
    EXPECT_EQ(ab, levenshtein(b, a));
    EXPECT_LE(levenshtein(a, c), ab + levenshtein(b, c));
    EXPECT_EQ(ab == 0, a == b);
  }
}

TEST(ClusterDiameter, Examples) {
  EXPECT_EQ(cluster_diameter({num(7)}, Metric::kEuclidean), 0.0);
  EXPECT_EQ(cluster_diameter({num(3), num(5), num(9)}, Metric::kEuclidean), 6.0);
  EXPECT_EQ(cluster_diameter({str("x"), str("x")}, Metric::kLevenshtein), 0.0);
  EXPECT_THROW(cluster_diameter({}, Metric::kEuclidean), InvalidArgument);
}

TEST(ValidateMfd, KeyLhsHoldsVacuously) {
  Relation r = load_csv("id,v\n1,3\n2,50\n3,9\n");
  MFDVerdict v = validate_mfd(r, {{0}, {1}, Metric::kEuclidean, 0.0});
  EXPECT_TRUE(v.holds);
  EXPECT_EQ(v.global_diameter, 0.0);
  EXPECT_EQ(v.clusters_checked, 0u);
}

TEST(ValidateMfd, DiameterFixture) {
  Relation r = diameter_fixture();
  MFDVerdict v = validate_mfd(r, {{0}, {1}, Metric::kEuclidean, 5.0});
  EXPECT_FALSE(v.holds);
  EXPECT_EQ(v.global_diameter, 6.0);
  ASSERT_EQ(v.violating_clusters.size(), 1u);
  EXPECT_EQ(v.violating_clusters[0].rows, (std::vector<RowId>{0, 1, 2}));
  EXPECT_EQ(v.violating_clusters[0].witness, (std::pair<RowId, RowId>{0, 2}));

  EXPECT_TRUE(validate_mfd(r, {{0}, {1}, Metric::kEuclidean, 6.0}).holds);
}

TEST(ValidateMfd, WitnessPrefersSmallestRowIds) {
  // Pairs (0,1) and (1,2) both reach the maximum of 2.
  Relation r = load_csv("g,v\na,1\na,3\na,1\n");
  MFDVerdict v = validate_mfd(r, {{0}, {1}, Metric::kEuclidean, 0.0});
  ASSERT_EQ(v.violating_clusters.size(), 1u);
  EXPECT_EQ(v.violating_clusters[0].witness, (std::pair<RowId, RowId>{0, 1}));
}

TEST(ValidateMfd, NullRhsMakesClusterIncomparable) {
  Relation r = load_csv("g,v\na,1\na,\nb,4\nb,4\n");
  MFDVerdict v = validate_mfd(r, {{0}, {1}, Metric::kEuclidean, 100.0});
  EXPECT_FALSE(v.holds);
  ASSERT_EQ(v.violating_clusters.size(), 1u);
  EXPECT_FALSE(v.violating_clusters[0].diameter.has_value());
  EXPECT_TRUE(std::isinf(v.global_diameter));
}

TEST(ValidateMfd, RejectsIncompatibleMetrics) {
  Relation r = load_csv("g,v,s\na,1,x\na,2,y\n");
  EXPECT_THROW(validate_mfd(r, {{0}, {1}, Metric::kLevenshtein, 1.0}), TypeMismatch);
  EXPECT_THROW(validate_mfd(r, {{0}, {2}, Metric::kEuclidean, 1.0}), TypeMismatch);
  EXPECT_THROW(validate_mfd(r, {{0}, {1, 2}, Metric::kEuclidean, 1.0}), TypeMismatch);
  EXPECT_THROW(validate_mfd(r, {{0}, {}, Metric::kEuclidean, 1.0}), InvalidArgument);
  EXPECT_THROW(validate_mfd(r, {{0}, {1}, Metric::kEuclidean, -1.0}), InvalidArgument);
}

TEST(ValidateMfd, LevenshteinClusters) {
  Relation r = load_csv("k,color\n1,blue\n1,bluee\n1,blu\n2,red\n");
  MFDVerdict v = validate_mfd(r, {{0}, {1}, Metric::kLevenshtein, 1.0});
  EXPECT_FALSE(v.holds);
  EXPECT_EQ(v.global_diameter, 2.0);
  EXPECT_TRUE(validate_mfd(r, {{0}, {1}, Metric::kLevenshtein, 2.0}).holds);
}

TEST(ValidateMfd, MonotoneInThresholdAndTightAtDiameter) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> pdist(0.0, 12.0);
  for (int trial = 0; trial < 300; ++trial) {
    Relation r = oracle::random_relation(rng, 3, 30);
    if (r.attribute_count() < 2) continue;
    MFDStatement stmt{{0}, {1}, Metric::kLevenshtein, pdist(rng)};
    MFDVerdict at = validate_mfd(r, stmt);
    MFDStatement wider = stmt;
    wider.p += pdist(rng);
    if (at.holds) EXPECT_TRUE(validate_mfd(r, wider).holds);
    stmt.p = at.global_diameter;
    EXPECT_TRUE(validate_mfd(r, stmt).holds);
    if (at.global_diameter > 0) {
      stmt.p = std::nextafter(at.global_diameter, 0.0);
      EXPECT_FALSE(validate_mfd(r, stmt).holds);
    }
  }
}
