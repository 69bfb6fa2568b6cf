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

#ifndef EDGESHARE_UTILITY_HPP_
#define EDGESHARE_UTILITY_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "edgeshare/model.hpp"

namespace edgeshare {

// Utility of a single (application, resource) entry as a function of the
// amount received. Linear: c*x. Sigmoid: 1 / (1 + exp(-mu (x - r))).
struct EntryUtility {
  UtilityKind kind = UtilityKind::kLinear;
  double coeff = 1.0;
  double mu = 1.0;
  double request = 0.0;

  double value(double x) const {
    if (kind == UtilityKind::kLinear) return coeff * x;
    return 1.0 / (1.0 + std::exp(-mu * (x - request)));
  }

  double slope(double x) const {
    if (kind == UtilityKind::kLinear) return coeff;
    const double s = value(x);
    return mu * s * (1.0 - s);
  }
};

inline EntryUtility EntryFor(const Scenario& s, const AppRef& app, ResourceIndex k) {
  const UtilitySpec& u = s.utilities[app.owner];
  return {u.kind, u.kind == UtilityKind::kLinear ? u.coeff(app.local, k) : 1.0, u.mu,
          s.request(app, k)};
}

struct UtilityBreakdown {
  double own = 0.0;
  std::vector<double> shared;  // shared[j]: income from serving player j's apps
  double weighted_total = 0.0;
};

namespace detail {

inline void CheckShape(const Allocation& alloc, const Scenario& s) {
  if (alloc.by_provider.size() != s.num_players) {
    throw std::invalid_argument("allocation: provider count mismatch");
  }
  const std::size_t apps = s.total_apps();
  for (const auto& x : alloc.by_provider) {
    if (x.rows() != apps || x.cols() != s.num_resources) {
      throw std::invalid_argument("allocation: matrix shape mismatch");
    }
  }
}

// Walks the suppliers of one (application, resource) entry in credit order:
// the native provider first, then the others by ascending index. Calls
// visit(supplier, before, after) for each supplier with a nonzero amount.
template <typename Visit>
void ForEachCredit(const Allocation& alloc, std::size_t app, PlayerIndex owner, ResourceIndex k,
                   Visit&& visit) {
  double level = alloc.by_provider[owner](app, k);
  visit(owner, 0.0, level);
  for (PlayerIndex m = 0; m < alloc.by_provider.size(); ++m) {
    if (m == owner) continue;
    const double x = alloc.by_provider[m](app, k);
    if (x == 0.0) continue;
    visit(m, level, level + x);
    level += x;
  }
}

}  // namespace detail

// u_n: utility player n draws from what it supplies to its own applications.
inline double EvalOwn(PlayerIndex n, const Allocation& alloc, const Scenario& s) {
  detail::CheckShape(alloc, s);
  const std::size_t off = s.app_offset(n);
  double total = 0.0;
  for (std::size_t i = 0; i < s.num_apps(n); ++i) {
    for (ResourceIndex k = 0; k < s.num_resources; ++k) {
      total += EntryFor(s, {n, i}, k).value(alloc.by_provider[n](off + i, k));
    }
  }
  return total;
}

// u_j^n for every j: what player n earns by serving j's applications, charged
// with j's utility. A foreign supplier is credited the increase in j's entry
// utility caused by its contribution, stacked on top of the native supply and
// of lower-indexed suppliers.
inline std::vector<double> EvalShared(PlayerIndex n, const Allocation& alloc, const Scenario& s) {
  detail::CheckShape(alloc, s);
  std::vector<double> shared(s.num_players, 0.0);
  const auto apps = s.apps();
  for (std::size_t g = 0; g < apps.size(); ++g) {
    const AppRef& app = apps[g];
    if (app.owner == n) continue;
    for (ResourceIndex k = 0; k < s.num_resources; ++k) {
      if (alloc.by_provider[n](g, k) == 0.0) continue;
      const EntryUtility f = EntryFor(s, app, k);
      detail::ForEachCredit(alloc, g, app.owner, k, [&](PlayerIndex m, double lo, double hi) {
        if (m == n) shared[app.owner] += f.value(hi) - f.value(lo);
      });
    }
  }
  return shared;
}

inline std::vector<UtilityBreakdown> Breakdown(const Allocation& alloc, const Scenario& s) {
  std::vector<UtilityBreakdown> out(s.num_players);
  for (PlayerIndex n = 0; n < s.num_players; ++n) {
    auto& b = out[n];
    b.own = EvalOwn(n, alloc, s);
    b.shared = EvalShared(n, alloc, s);
    double foreign = 0.0;
    for (PlayerIndex j = 0; j < s.num_players; ++j) {
      if (j != n) foreign += b.shared[j];
    }
    b.weighted_total = s.weights[n].own * b.own + s.weights[n].shared * foreign;
  }
  return out;
}

// Coalition objective: sum of weighted totals over the members of S.
inline double CoalitionObjective(Coalition coalition, const Allocation& alloc,
                                 const Scenario& s) {
  const auto parts = Breakdown(alloc, s);
  double total = 0.0;
  for (PlayerIndex n : coalition.members()) total += parts[n].weighted_total;
  return total;
}

}  // namespace edgeshare

#endif  // EDGESHARE_UTILITY_HPP_
