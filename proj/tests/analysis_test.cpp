// Copyright 2026 The edgeshare Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "edgeshare/analysis.hpp"
#include "test_support.hpp"

namespace edgeshare {
namespace {

using testing::MakeScenario;

const std::vector<double> kReference{36, 4.37, 44.545, 4.31, 44.623, 17.37, 62.06};

TEST(CoreVerify, ReferenceShapleyIsInCore) {
  const auto table = CharacteristicTable::FromValues(3, kReference);
  const auto r = CoreVerify(ShapleyFromTable(table), table, 1e-6);
  EXPECT_TRUE(r.in_core());
  EXPECT_TRUE(r.is_imputation);
  EXPECT_EQ(r.slack.size(), 7u);
  // The reference fast-core split (44.68, 8.68, 8.68) is in the core too.
  EXPECT_TRUE(CoreVerify({44.68, 8.68, 8.70}, table, 1e-6).in_core());
}

TEST(CoreVerify, IndividualRationalityViolation) {
  const auto table = CharacteristicTable::FromValues(3, kReference);
  const auto r = CoreVerify({50.0, 2.0, 10.06}, table, 1e-6);
  EXPECT_FALSE(r.in_core());
  EXPECT_FALSE(r.is_imputation);
  EXPECT_TRUE(r.group_rational);
  ASSERT_FALSE(r.violated.empty());
  EXPECT_EQ(r.violated.front().coalition, Coalition::Singleton(1));
  EXPECT_NEAR(r.violated.front().slack(), 2.0 - 4.37, 1e-12);
}

TEST(CoreVerify, EfficiencyGap) {
  const auto table = CharacteristicTable::FromValues(2, {1.0, 1.0, 3.0});
  const auto r = CoreVerify({1.0, 1.0}, table, 1e-6);
  EXPECT_FALSE(r.group_rational);
  EXPECT_NEAR(r.efficiency_gap, -1.0, 1e-12);
  EXPECT_FALSE(r.in_core());
  EXPECT_TRUE(r.violated.size() == 1 && r.violated[0].coalition == Coalition(3));
}

TEST(CoreVerify, SinglePlayer) {
  const auto table = CharacteristicTable::FromValues(1, {4.0});
  EXPECT_TRUE(CoreVerify({4.0}, table, 1e-9).in_core());
  EXPECT_FALSE(CoreVerify({3.0}, table, 1e-9).in_core());
}

TEST(CoreVerify, RejectsIncompleteTableAndWrongSize) {
  CharacteristicTable partial(2);
  partial.set(Coalition(1), 1.0);
  EXPECT_THROW(CoreVerify({1.0, 1.0}, partial, 1e-6), std::invalid_argument);
  const auto table = CharacteristicTable::FromValues(2, {1.0, 1.0, 3.0});
  EXPECT_THROW(CoreVerify({1.0}, table, 1e-6), std::invalid_argument);
}

// Two providers with one spare unit each and one provider with nothing. The
// only core point is (1, 1, 1); neither payoff rule reaches it.
TEST(CoreVerify, ReportsDeficitOnSellerBuyerGame) {
  const Scenario s = MakeScenario({{2}, {2}, {0}}, {{{1}}, {{1}}, {{1}}},
                                  {UtilitySpec::Linear(), UtilitySpec::Linear(),
                                   UtilitySpec::Linear()});
  const auto table = BuildCharacteristicTable(s);
  const std::vector<double> expect{1, 1, 2, 0, 2, 2, 3};
  for (std::uint32_t m = 1; m < 8; ++m) EXPECT_NEAR(table.value(Coalition(m)), expect[m - 1], 1e-12);
  EXPECT_TRUE(CoreVerify({1, 1, 1}, table, 1e-9).in_core());

  const auto fast = FastCore(s);
  EXPECT_NEAR(fast.payoffs[0], 2.0, 1e-12);
  const auto rf = CoreVerify(fast.payoffs, table, 1e-6);
  EXPECT_FALSE(rf.in_core());
  EXPECT_NEAR(rf.worst_deficit(), 1.0, 1e-9);

  const auto phi = ShapleyFromTable(table);
  EXPECT_NEAR(phi[2], 2.0 / 3.0, 1e-12);
  const auto rs = CoreVerify(phi, table, 1e-6);
  EXPECT_FALSE(rs.in_core());
  EXPECT_NEAR(rs.worst_deficit(), 1.0 / 6.0, 1e-9);
}

TEST(SuperadditivityAudit, ReferenceTableHasNone) {
  EXPECT_TRUE(SuperadditivityAudit(CharacteristicTable::FromValues(3, kReference), 1e-6).empty());
}

TEST(SuperadditivityAudit, FindsInjectedViolation) {
  std::vector<double> v = kReference;
  v[5] = 5.0;  // v({2,3}) < v({2}) + v({3})
  const auto out = SuperadditivityAudit(CharacteristicTable::FromValues(3, v), 1e-6);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].first, Coalition(2));
  EXPECT_EQ(out[0].second, Coalition(4));
  EXPECT_NEAR(out[0].deficit, 4.37 + 4.31 - 5.0, 1e-12);
}

TEST(SuperadditivityAudit, ToleranceSuppressesRoundOff) {
  const auto t = CharacteristicTable::FromValues(2, {1.0, 1.0, 2.0 - 1e-9});
  EXPECT_TRUE(SuperadditivityAudit(t, 1e-6).empty());
  EXPECT_EQ(SuperadditivityAudit(t, 1e-12).size(), 1u);
}

TEST(SuperadditivityAudit, SolvedTablesAreSuperadditive) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const UtilityKind kind = seed % 2 ? UtilityKind::kSigmoid : UtilityKind::kLinear;
    const Scenario s = GenerateScenario({3, 3, 3, kind, seed % 4 == 1 ? 10.0 : 0.01, seed, {}});
    const double tol = kind == UtilityKind::kLinear ? 1e-6 : 1e-3;
    EXPECT_TRUE(SuperadditivityAudit(BuildCharacteristicTable(s), tol).empty()) << seed;
  }
}

TEST(CompareMethods, CountsAndTotals) {
  const Scenario s = GenerateScenario({3, 2, 3, UtilityKind::kLinear, 0.01, 2, {}});
  const auto rep = CompareMethods(s, {}, 3);
  EXPECT_EQ(rep.shapley.solves, 7u);
  EXPECT_EQ(rep.fast.solves, 6u);
  EXPECT_EQ(rep.shapley.times_ms.size(), 3u);
  EXPECT_EQ(rep.fast.times_ms.size(), 3u);
  EXPECT_NEAR(rep.shapley.total, rep.grand_value, 1e-9);
  EXPECT_NEAR(rep.fast.total, rep.grand_value, 1e-6);
  ASSERT_EQ(rep.standalone.size(), 3u);
  EXPECT_THROW(CompareMethods(s, {}, 0), std::invalid_argument);
}

TEST(Median, OddEvenEmpty) {
  EXPECT_EQ(Median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(Median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_EQ(Median({}), 0.0);
}

}  // namespace
}  // namespace edgeshare
