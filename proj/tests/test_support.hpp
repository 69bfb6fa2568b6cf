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

#ifndef EDGESHARE_TESTS_TEST_SUPPORT_HPP_
#define EDGESHARE_TESTS_TEST_SUPPORT_HPP_

#include <random>
#include <vector>

#include "edgeshare/model.hpp"

namespace edgeshare::testing {

// Scenario from explicit per-player data; weights default to w = zeta = 1.
inline Scenario MakeScenario(std::vector<std::vector<double>> caps,
                             std::vector<std::vector<std::vector<double>>> reqs,
                             std::vector<UtilitySpec> utilities,
                             std::vector<Weights> weights = {}) {
  Scenario s;
  s.num_players = caps.size();
  s.num_resources = caps.empty() ? 0 : caps.front().size();
  s.capacities = std::move(caps);
  for (const auto& r : reqs) s.requests.push_back(Matrix::FromRows(r));
  s.utilities = std::move(utilities);
  s.weights = weights.empty() ? std::vector<Weights>(s.num_players) : std::move(weights);
  s.seed = 0;
  return s;
}

// Random feasible allocation: random entries scaled down until every provider
// capacity and application request holds.
inline Allocation RandomFeasible(const Scenario& s, std::mt19937_64& rng, double density = 0.7) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Allocation a = Allocation::Zero(s);
  const auto apps = s.apps();
  for (auto& x : a.by_provider) {
    for (double& v : x.data()) v = unit(rng) < density ? unit(rng) * 10.0 : 0.0;
  }
  for (PlayerIndex n = 0; n < s.num_players; ++n) {
    for (ResourceIndex k = 0; k < s.num_resources; ++k) {
      double used = 0.0;
      for (std::size_t g = 0; g < apps.size(); ++g) used += a.by_provider[n](g, k);
      if (used > s.capacities[n][k]) {
        const double f = s.capacities[n][k] / used;
        for (std::size_t g = 0; g < apps.size(); ++g) a.by_provider[n](g, k) *= f;
      }
    }
  }
  for (std::size_t g = 0; g < apps.size(); ++g) {
    for (ResourceIndex k = 0; k < s.num_resources; ++k) {
      double got = 0.0;
      for (PlayerIndex n = 0; n < s.num_players; ++n) got += a.by_provider[n](g, k);
      const double r = s.request(apps[g], k);
      if (got > r) {
        for (PlayerIndex n = 0; n < s.num_players; ++n) a.by_provider[n](g, k) *= r / got;
      }
    }
  }
  return a;
}

// Elementwise-smaller copy: every entry multiplied by an independent U[0,1].
inline Allocation ShrinkRandomly(const Allocation& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Allocation a = b;
  for (auto& x : a.by_provider) {
    for (double& v : x.data()) v *= unit(rng);
  }
  return a;
}

}  // namespace edgeshare::testing

#endif  // EDGESHARE_TESTS_TEST_SUPPORT_HPP_
