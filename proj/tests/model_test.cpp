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

#include <algorithm>
#include <string>

#include "edgeshare/io.hpp"
#include "edgeshare/model.hpp"

namespace edgeshare {
namespace {

bool Mentions(const std::vector<std::string>& problems, const std::string& what) {
  return std::any_of(problems.begin(), problems.end(),
                     [&](const std::string& p) { return p.find(what) != std::string::npos; });
}

Scenario ThreePlayer() {
  GeneratorParams g;
  g.players = 3;
  g.apps_per_player = 2;
  g.seed = 5;
  return GenerateScenario(g);
}

TEST(ValidateScenario, WellFormedHasNoViolations) {
  EXPECT_TRUE(ValidateScenario(ThreePlayer()).empty());
}

TEST(ValidateScenario, NegativeRequest) {
  Scenario s = ThreePlayer();
  s.requests[0](0, 0) = -1.0;
  EXPECT_TRUE(Mentions(ValidateScenario(s), "negative request"));
}

TEST(ValidateScenario, MismatchedListLengths) {
  Scenario s = ThreePlayer();
  s.weights.pop_back();
  EXPECT_TRUE(Mentions(ValidateScenario(s), "player count"));
}

TEST(ValidateScenario, OtherInvariants) {
  Scenario s = ThreePlayer();
  s.capacities[1][2] = -0.5;
  s.utilities[2] = UtilitySpec::Sigmoid(0.0);
  s.weights[0].shared = -1.0;
  const auto problems = ValidateScenario(s);
  EXPECT_TRUE(Mentions(problems, "negative capacity"));
  EXPECT_TRUE(Mentions(problems, "steepness"));
  EXPECT_TRUE(Mentions(problems, "negative weight"));
}

TEST(GenerateScenario, DeterministicForFixedSeed) {
  GeneratorParams g{3, 3, 3, UtilityKind::kSigmoid, 0.01, 7, {}};
  const Scenario a = GenerateScenario(g);
  const Scenario b = GenerateScenario(g);
  EXPECT_EQ(a, b);
  EXPECT_EQ(ScenarioToString(a), ScenarioToString(b));
  g.seed = 8;
  EXPECT_NE(ScenarioToString(a), ScenarioToString(GenerateScenario(g)));
}

TEST(GenerateScenario, SingleEntry) {
  const Scenario s = GenerateScenario({1, 1, 1, UtilityKind::kLinear, 0.01, 0, {}});
  ASSERT_EQ(s.requests[0].rows(), 1u);
  ASSERT_EQ(s.requests[0].cols(), 1u);
  const double r = s.requests[0](0, 0);
  EXPECT_GE(r, 1.0);
  EXPECT_LE(r, 10.0);
  EXPECT_GE(s.capacities[0][0], 0.5 * r);
  EXPECT_LE(s.capacities[0][0], 1.5 * r);
}

TEST(GenerateScenario, LargeShapeIsValid) {
  const Scenario s = GenerateScenario({3, 3, 20, UtilityKind::kSigmoid, 10.0, 42, {}});
  EXPECT_TRUE(ValidateScenario(s).empty());
  EXPECT_EQ(s.total_apps(), 60u);
}

TEST(GenerateScenario, RejectsBadSizes) {
  EXPECT_THROW(GenerateScenario({0, 3, 3, UtilityKind::kLinear, 0.01, 0, {}}),
               std::invalid_argument);
  EXPECT_THROW(GenerateScenario({3, 0, 3, UtilityKind::kLinear, 0.01, 0, {}}),
               std::invalid_argument);
  EXPECT_THROW(GenerateScenario({3, 3, 0, UtilityKind::kLinear, 0.01, 0, {}}),
               std::invalid_argument);
  EXPECT_THROW(GenerateScenario({25, 3, 3, UtilityKind::kLinear, 0.01, 0, {}}),
               std::invalid_argument);
}

// Ranges and validity over many seeded draws.
TEST(GenerateScenario, RangesHoldOverManySeeds) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::size_t n = 1 + seed % 4;
    const std::size_t m = 1 + seed % 5;
    const Scenario s = GenerateScenario({n, 3, m, UtilityKind::kLinear, 0.01, seed, {}});
    ASSERT_TRUE(ValidateScenario(s).empty()) << "seed " << seed;
    for (PlayerIndex p = 0; p < n; ++p) {
      for (ResourceIndex k = 0; k < 3; ++k) {
        double demand = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const double r = s.requests[p](i, k);
          ASSERT_GE(r, 1.0);
          ASSERT_LE(r, 10.0);
          demand += r;
        }
        ASSERT_GE(s.capacities[p][k], 0.5 * demand - 1e-12);
        ASSERT_LE(s.capacities[p][k], 1.5 * demand + 1e-12);
      }
    }
  }
}

TEST(Coalition, Basics) {
  const Coalition c = Coalition::Singleton(0).with(2);
  EXPECT_EQ(c.mask(), 5u);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.members(), (std::vector<PlayerIndex>{0, 2}));
  EXPECT_TRUE(c.contains(2));
  EXPECT_FALSE(c.contains(1));
  EXPECT_TRUE(c.disjoint(Coalition::Singleton(1)));
  EXPECT_EQ(c.without(0), Coalition::Singleton(2));
  EXPECT_EQ(Coalition::Grand(3).mask(), 7u);
  EXPECT_THROW(Coalition::Grand(25), std::out_of_range);
}

TEST(Scenario, AppIndexing) {
  Scenario s = GenerateScenario({3, 2, 1, UtilityKind::kLinear, 0.01, 1, {}});
  s.requests[1] = Matrix(3, 2, 1.0);
  EXPECT_EQ(s.app_offset(0), 0u);
  EXPECT_EQ(s.app_offset(1), 1u);
  EXPECT_EQ(s.app_offset(2), 4u);
  const auto apps = s.apps();
  ASSERT_EQ(apps.size(), 5u);
  EXPECT_EQ(apps[3].owner, 1u);
  EXPECT_EQ(apps[3].local, 2u);
}

}  // namespace
}  // namespace edgeshare
