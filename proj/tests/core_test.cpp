// Copyright 2026 The incluster Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "incluster/core.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "brute.hpp"

namespace incluster {
namespace {

TEST(IncompleteVectorTest, ParsesAndPrints) {
  const auto w = IncompleteVector::from_string("01?1*");
  EXPECT_EQ(w.dim(), 5u);
  EXPECT_EQ(w.get(0), Trit::Zero);
  EXPECT_EQ(w.get(2), Trit::Missing);
  EXPECT_EQ(w.get(4), Trit::Missing);
  EXPECT_EQ(w.missing_count(), 2u);
  EXPECT_EQ(w.to_string(), "01?1?");
  EXPECT_THROW(IncompleteVector::from_string("01x"), UsageError);
}

TEST(IncompleteVectorTest, CompletedBy) {
  const auto w = IncompleteVector::from_string("1?0");
  EXPECT_TRUE(w.is_completed_by(complete_from_string("110")));
  EXPECT_TRUE(w.is_completed_by(complete_from_string("100")));
  EXPECT_FALSE(w.is_completed_by(complete_from_string("101")));
}

TEST(DistanceTest, CountsOnlyKnownDisagreements) {
  const auto a = IncompleteVector::from_string("01?1");
  const auto b = IncompleteVector::from_string("1??0");
  EXPECT_EQ(distance(a, b), 2u);
  EXPECT_EQ(delta_set(a, b), CoordSet(4, {0, 3}));
  EXPECT_EQ(distance(a, complete_from_string("0111")), 0u);
}

TEST(DistanceTest, IsMinimumOverCompletions) {
  brute::Rng rng(3);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t d = 1 + rng.below(9);
    const auto rows = brute::random_rows(rng, 2, d, rng.below(2 * d));
    const auto m = brute::to_matrix(rows, d);
    std::size_t best = d + 1;
    for (const auto& x : completions(m[0])) {
      for (const auto& y : completions(m[1])) {
        best = std::min(best, distance(x, y));
      }
    }
    EXPECT_EQ(distance(m[0], m[1]), best);
    const std::string s = brute::bits(rng.next(), d);
    EXPECT_EQ(distance(m[0], complete_from_string(s)),
              brute::best_distance(rows[0], s));
  }
}

TEST(CompletionTest, LexicographicAndComplete) {
  const auto w = IncompleteVector::from_string("?1?");
  std::vector<std::string> seen;
  for (const auto& c : completions(w)) seen.push_back(complete_to_string(c));
  EXPECT_EQ(seen, (std::vector<std::string>{"010", "011", "110", "111"}));
}

TEST(DeletionSetTest, LambdaIsLeastFeasibleP) {
  // Missing counts 3, 0, 1, 2: p = 1 leaves two rows above 1, p = 2 leaves
  // only the first.
  const auto m = IncompleteMatrix::from_strings({"???0", "0000", "?000", "??00"});
  const auto ds = compute_deletion_set(m);
  EXPECT_EQ(ds.lambda, 2u);
  EXPECT_EQ(ds.deleted_rows, (std::vector<std::size_t>{0}));
  EXPECT_EQ(kept_rows(m, ds), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(DeletionSetTest, MatchesDefinitionOnRandomMatrices) {
  brute::Rng rng(5);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n = 1 + rng.below(8);
    const std::size_t d = 1 + rng.below(6);
    const auto m = brute::to_matrix(brute::random_rows(rng, n, d, rng.below(n * d)), d);
    const auto ds = compute_deletion_set(m);
    auto feasible = [&](std::size_t p) {
      std::size_t above = 0;
      for (const auto& w : m.rows()) above += w.missing_count() > p ? 1 : 0;
      return above <= p;
    };
    EXPECT_TRUE(feasible(ds.lambda));
    if (ds.lambda > 0) {
      EXPECT_FALSE(feasible(ds.lambda - 1));
    }
    EXPECT_LE(ds.deleted_rows.size(), ds.lambda);
    for (auto i : kept_rows(m, ds)) EXPECT_LE(m[i].missing_count(), ds.lambda);
  }
}

TEST(NormalizeTest, PivotBecomesZero) {
  const auto m = IncompleteMatrix::from_strings({"10?", "011"});
  const auto pivot = complete_from_string("101");
  const auto n = normalize(m, pivot);
  EXPECT_EQ(n[0].to_string(), "00?");
  EXPECT_EQ(n[1].to_string(), "110");
  EXPECT_THROW(normalize(m, complete_from_string("10")), UsageError);
}

TEST(ImportantCoordsTest, OnlyDisputedColumns) {
  const auto m = IncompleteMatrix::from_strings({"01?1", "00?1", "0??1"});
  EXPECT_EQ(important_coords(m), CoordSet(4, {1}));
  const auto r = restrict_coords(m, {1, 3});
  EXPECT_EQ(r[2].to_string(), "?1");
}

TEST(VerifyTest, AcceptsAndRejects) {
  const auto m = IncompleteMatrix::from_strings({"10?", "100", "0?1"});
  ClusterCertificate c;
  c.kind = ClusterKind::Diam;
  c.bound = 1;
  c.rows = {0, 1};
  c.completions = {complete_from_string("101"), complete_from_string("100")};
  EXPECT_TRUE(verify_certificate(m, c, 2, 1));
  EXPECT_FALSE(verify_certificate(m, c, 3, 1));
  EXPECT_FALSE(verify_certificate(m, c, 2, 0));

  auto dup = c;
  dup.rows = {1, 1};
  dup.completions = {complete_from_string("100"), complete_from_string("100")};
  EXPECT_FALSE(verify_certificate(m, dup, 2, 1));

  auto wrong = c;
  wrong.completions[1] = complete_from_string("110");
  EXPECT_FALSE(verify_certificate(m, wrong, 2, 1));

  auto rad = c;
  rad.kind = ClusterKind::Rad;
  EXPECT_FALSE(verify_certificate(m, rad, 2, 1));
  rad.center = complete_from_string("100");
  EXPECT_TRUE(verify_certificate(m, rad, 2, 1));

  auto bad = c;
  bad.rows[0] = 7;
  EXPECT_THROW(verify_certificate(m, bad, 1, 1), UsageError);
}

TEST(SaturatingTest, Clamps) {
  EXPECT_EQ(sat_pow(3, 4), 81u);
  EXPECT_EQ(sat_pow(2, 70), UINT64_MAX);
  EXPECT_EQ(sat_add(UINT64_MAX, 1), UINT64_MAX);
}

}  // namespace
}  // namespace incluster
