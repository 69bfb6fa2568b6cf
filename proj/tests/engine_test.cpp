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

#include <numeric>

#include "edgeshare/engine.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace edgeshare {
namespace {

using testing::MakeScenario;

// Reference three-player table, indexed by mask - 1:
// {1}, {2}, {1,2}, {3}, {1,3}, {2,3}, {1,2,3}.
const std::vector<double> kReference{36, 4.37, 44.545, 4.31, 44.623, 17.37, 62.06};

TEST(Shapley, ReferenceTable) {
  const auto table = CharacteristicTable::FromValues(3, kReference);
  const auto phi = ShapleyFromTable(table);
  const auto ref = oracle::ShapleyByPermutations(3, [](std::uint32_t m) { return kReference[m - 1]; });
  ASSERT_EQ(phi.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(phi[i], ref[i], 1e-12);
  EXPECT_NEAR(phi[0], 40.34, 0.1);
  EXPECT_NEAR(phi[1], 10.90, 0.1);
  EXPECT_NEAR(phi[2], 10.81, 0.1);
  EXPECT_NEAR(std::accumulate(phi.begin(), phi.end(), 0.0), 62.06, 0.01);
}

TEST(Shapley, SinglePlayer) {
  const auto phi = ShapleyFromTable(CharacteristicTable::FromValues(1, {7.5}));
  ASSERT_EQ(phi.size(), 1u);
  EXPECT_EQ(phi[0], 7.5);
}

TEST(Shapley, SymmetricPair) {
  const auto phi = ShapleyFromTable(CharacteristicTable::FromValues(2, {3.0, 3.0, 10.0}));
  EXPECT_DOUBLE_EQ(phi[0], 5.0);
  EXPECT_DOUBLE_EQ(phi[1], 5.0);
}

TEST(Shapley, DummyPlayerGetsOwnValue) {
  // Player 3 adds exactly 2 to every coalition.
  std::vector<double> v(7);
  const std::vector<double> base{0, 1, 1, 4};  // v over masks of players {1,2}
  for (std::uint32_t m = 1; m < 8; ++m) v[m - 1] = base[m & 3] + ((m & 4) ? 2.0 : 0.0);
  const auto phi = ShapleyFromTable(CharacteristicTable::FromValues(3, v));
  EXPECT_NEAR(phi[2], 2.0, 1e-12);
  EXPECT_NEAR(phi[0], 2.0, 1e-12);
}

TEST(Shapley, RandomTablesMatchPermutationOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> val(0.0, 100.0);
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<double> v((1u << n) - 1);
    for (double& x : v) x = val(rng);
    const auto phi = ShapleyFromTable(CharacteristicTable::FromValues(n, v));
    const auto ref = oracle::ShapleyByPermutations(n, [&](std::uint32_t m) { return v[m - 1]; });
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(phi[i], ref[i], 1e-9);
  }
}

TEST(Shapley, IncompleteTableThrows) {
  CharacteristicTable t(2);
  t.set(Coalition(1), 1.0);
  EXPECT_THROW(ShapleyFromTable(t), std::exception);
}

TEST(CharacteristicTable, FromValuesChecksLength) {
  EXPECT_THROW(CharacteristicTable::FromValues(2, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(CharacteristicTable(0), std::invalid_argument);
}

TEST(CharacteristicValue, CachesSolves) {
  const Scenario s = GenerateScenario({3, 2, 3, UtilityKind::kLinear, 0.01, 4, {}});
  SolveCounter counter;
  EngineOptions opt;
  opt.solver.counter = &counter;
  CharacteristicTable cache(3);
  const double a = CharacteristicValue(Coalition(5), s, cache, opt);
  const double b = CharacteristicValue(Coalition(5), s, cache, opt);
  EXPECT_EQ(a, b);
  EXPECT_EQ(counter.value(), 1u);
  EXPECT_EQ(CharacteristicValue(Coalition(), s, cache, opt), 0.0);
}

TEST(BuildCharacteristicTable, SolveCountAndCompleteness) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const Scenario s = GenerateScenario({n, 2, 2, UtilityKind::kLinear, 0.01, n, {}});
    SolveCounter counter;
    EngineOptions opt;
    opt.solver.counter = &counter;
    const auto res = ShapleyPayoffs(s, opt);
    EXPECT_TRUE(res.table.complete());
    EXPECT_EQ(counter.value(), (1u << n) - 1);
    const double total = std::accumulate(res.payoffs.begin(), res.payoffs.end(), 0.0);
    EXPECT_NEAR(total, res.table.value(res.table.grand()), 1e-9);
  }
}

TEST(BuildCharacteristicTable, WorkersDoNotChangeValues) {
  const Scenario s = GenerateScenario({4, 2, 3, UtilityKind::kSigmoid, 0.01, 9, {}});
  EngineOptions serial, threaded;
  serial.solver.restarts = threaded.solver.restarts = 4;
  threaded.workers = 3;
  const auto a = BuildCharacteristicTable(s, serial);
  const auto b = BuildCharacteristicTable(s, threaded);
  for (std::uint32_t m = 1; m < 16; ++m) EXPECT_EQ(a.value(Coalition(m)), b.value(Coalition(m)));
}

TEST(FastCore, TwoPlayerTrace) {
  const Scenario s = MakeScenario({{2}, {0}}, {{{1}}, {{1}}},
                                  {UtilitySpec::Linear(), UtilitySpec::Linear()});
  const auto res = FastCore(s);
  EXPECT_NEAR(res.phase1[0], 1.0, 1e-12);
  EXPECT_NEAR(res.phase2[0], 1.0, 1e-12);
  EXPECT_EQ(res.phase1[1], 0.0);
  EXPECT_EQ(res.phase2[1], 0.0);
  EXPECT_NEAR(res.payoffs[0], 2.0, 1e-12);
  EXPECT_EQ(res.payoffs[1], 0.0);
  // v({1,2}) from the exact solver and the same number by hand.
  EXPECT_NEAR(res.total(), SolveCoalition(Coalition::Grand(2), s).value, 1e-12);
}

TEST(FastCore, NoResidualMeansStandalone) {
  const Scenario s = MakeScenario({{3, 5}, {4, 2}, {1, 1}}, {{{1, 2}, {2, 3}}, {{4, 2}}, {{1, 1}}},
                                  {UtilitySpec::Linear(), UtilitySpec::Linear(),
                                   UtilitySpec::Linear()});
  const auto res = FastCore(s);
  for (PlayerIndex n = 0; n < 3; ++n) {
    EXPECT_EQ(res.phase2[n], 0.0);
    EXPECT_NEAR(res.payoffs[n], SolveCoalition(Coalition::Singleton(n), s).value, 1e-12);
  }
}

TEST(FastCore, WeightsScalePhases) {
  Scenario s = MakeScenario({{2}, {0}}, {{{1}}, {{1}}},
                            {UtilitySpec::Linear(), UtilitySpec::Linear()},
                            {Weights{2.0, 0.5}, Weights{1.0, 1.0}});
  const auto res = FastCore(s);
  EXPECT_NEAR(res.payoffs[0], 2.0 * 1.0 + 0.5 * 1.0, 1e-12);
}

TEST(FastCore, SolveCountIsTwoN) {
  for (std::size_t n = 2; n <= 8; ++n) {
    const Scenario s = GenerateScenario({n, 2, 3, UtilityKind::kSigmoid, 10.0, n, {}});
    SolveCounter counter;
    EngineOptions opt;
    opt.solver.counter = &counter;
    opt.solver.restarts = 2;
    FastCore(s, opt);
    EXPECT_EQ(counter.value(), 2 * n);
  }
}

TEST(FastCore, AllocationIsFeasibleAndIndividuallyRational) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const UtilityKind kind = seed % 2 ? UtilityKind::kSigmoid : UtilityKind::kLinear;
    const Scenario s = GenerateScenario({2 + seed % 3, 3, 3, kind, 0.01, seed, {}});
    const auto res = FastCore(s);
    EXPECT_LE(oracle::FeasibilityViolation(res.allocation, s), 1e-9);
    for (PlayerIndex n = 0; n < s.num_players; ++n) {
      EXPECT_GE(res.payoffs[n], SolveCoalition(Coalition::Singleton(n), s).value - 1e-9);
    }
  }
}

TEST(FastCore, LinearTotalMatchesGrandCoalition) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Scenario s = GenerateScenario({2 + seed % 3, 3, 3, UtilityKind::kLinear, 0.01, seed, {}});
    EXPECT_NEAR(FastCore(s).total(), SolveCoalition(Coalition::Grand(s.num_players), s).value, 1e-6);
  }
}

// Native-first commitment is not efficient for sigmoid utilities: provider 1
// keeps its unit for its own app although two half-unit foreign apps would
// gain twice as much.
TEST(FastCore, SigmoidNativeFirstLeavesValue) {
  const Scenario s = MakeScenario({{1}, {0}}, {{{1}}, {{0.5}, {0.5}}},
                                  {UtilitySpec::Sigmoid(10), UtilitySpec::Sigmoid(10)});
  const double fast = FastCore(s).total();
  const double grand = SolveCoalition(Coalition::Grand(2), s).value;
  EXPECT_NEAR(fast, 0.5 + 2 * oracle::Sigmoid(10, 0, 0.5), 1e-6);
  EXPECT_NEAR(grand, 1.0 + oracle::Sigmoid(10, 0, 1), 1e-6);
}

TEST(FastCore, OrderOption) {
  const Scenario s = GenerateScenario({3, 2, 3, UtilityKind::kLinear, 0.01, 3, {}});
  const auto res = FastCore(s, {}, {2, 0, 1});
  EXPECT_EQ(res.order, (std::vector<PlayerIndex>{2, 0, 1}));
  EXPECT_NEAR(res.total(), FastCore(s).total(), 1e-6);
  EXPECT_THROW(FastCore(s, {}, {0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(FastCore(s, {}, {0, 1}), std::invalid_argument);
}

}  // namespace
}  // namespace edgeshare
