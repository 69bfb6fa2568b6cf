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

#ifndef EDGESHARE_ANALYSIS_HPP_
#define EDGESHARE_ANALYSIS_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgeshare/engine.hpp"
#include "edgeshare/model.hpp"

namespace edgeshare {

struct CoalitionSlack {
  Coalition coalition;
  double payoff_sum = 0.0;  // sum of x_n over members
  double value = 0.0;       // v(S)
  double slack() const { return payoff_sum - value; }
};

struct CoreReport {
  bool is_imputation = false;
  bool group_rational = false;
  std::vector<CoalitionSlack> violated;  // payoff_sum < v(S) - tol
  std::vector<CoalitionSlack> slack;     // every nonempty coalition, by mask
  double efficiency_gap = 0.0;           // sum x_n - v(N)
  double tolerance = 0.0;

  bool in_core() const { return violated.empty() && group_rational; }
  double worst_deficit() const {
    double worst = 0.0;
    for (const auto& s : violated) worst = std::max(worst, -s.slack());
    return worst;
  }
};

// Checks sum_{n in S} x_n >= v(S) - tol for every nonempty S, and
// |sum_n x_n - v(N)| <= tol.
inline CoreReport CoreVerify(const PayoffVector& x, const CharacteristicTable& table, double tol) {
  if (!table.complete()) throw std::invalid_argument("CoreVerify: incomplete characteristic table");
  if (x.size() != table.num_players()) throw std::invalid_argument("CoreVerify: payoff size");
  CoreReport r;
  r.tolerance = tol;
  const std::uint32_t full = table.grand().mask();
  bool individually_rational = true;
  for (std::uint32_t m = 1; m <= full; ++m) {
    const Coalition c(m);
    CoalitionSlack sl{c, 0.0, table.value(c)};
    for (PlayerIndex p : c.members()) sl.payoff_sum += x[p];
    if (sl.slack() < -tol) {
      r.violated.push_back(sl);
      if (c.size() == 1) individually_rational = false;
    }
    r.slack.push_back(sl);
  }
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  r.efficiency_gap = total - table.value(table.grand());
  r.group_rational = std::abs(r.efficiency_gap) <= tol;
  r.is_imputation = individually_rational && r.group_rational;
  return r;
}

struct SuperadditivityViolation {
  Coalition first;
  Coalition second;
  double deficit = 0.0;  // v(S1) + v(S2) - v(S1 u S2)
};

// Every unordered pair of disjoint nonempty coalitions with
// v(S1 u S2) < v(S1) + v(S2) - tol.
inline std::vector<SuperadditivityViolation> SuperadditivityAudit(const CharacteristicTable& table,
                                                                  double tol) {
  if (!table.complete()) throw std::invalid_argument("SuperadditivityAudit: incomplete table");
  std::vector<SuperadditivityViolation> out;
  const std::uint32_t full = table.grand().mask();
  for (std::uint32_t a = 1; a <= full; ++a) {
    const std::uint32_t rest = full & ~a;
    for (std::uint32_t b = rest; b != 0; b = (b - 1) & rest) {
      if (b < a) continue;
      const double deficit =
          table.value(Coalition(a)) + table.value(Coalition(b)) - table.value(Coalition(a | b));
      if (deficit > tol) out.push_back({Coalition(a), Coalition(b), deficit});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    return std::pair(l.first.mask(), l.second.mask()) < std::pair(r.first.mask(), r.second.mask());
  });
  return out;
}

struct MethodResult {
  std::string method;  // "fast" or "shapley"
  PayoffVector payoffs;
  double total = 0.0;
  std::uint64_t solves = 0;
  double median_ms = 0.0;
  std::vector<double> times_ms;
};

struct ComparisonReport {
  MethodResult shapley;
  MethodResult fast;
  std::vector<double> standalone;  // v({n})
  double grand_value = 0.0;        // v(N) from the characteristic table
  CharacteristicTable table;

  // (t_shapley - t_fast) / t_shapley
  double speedup() const {
    return shapley.median_ms > 0.0 ? (shapley.median_ms - fast.median_ms) / shapley.median_ms : 0.0;
  }
};

inline double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Runs both pipelines on the same scenario `repetitions` times each, serially,
// and reports payoffs, solve counts and median wall time.
inline ComparisonReport CompareMethods(const Scenario& s, SolverOptions solver = {},
                                       int repetitions = 5) {
  if (repetitions < 1) throw std::invalid_argument("CompareMethods: repetitions must be >= 1");
  EngineOptions opt;
  opt.solver = solver;
  opt.workers = 1;
  ComparisonReport rep;
  rep.shapley.method = "shapley";
  rep.fast.method = "fast";
  using Clock = std::chrono::steady_clock;
  auto ms = [](Clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };

  for (int r = 0; r < repetitions; ++r) {
    SolveCounter counter;
    opt.solver.counter = &counter;
    const auto t0 = Clock::now();
    auto sv = ShapleyPayoffs(s, opt);
    rep.shapley.times_ms.push_back(ms(Clock::now() - t0));
    if (r == 0) {
      rep.shapley.payoffs = sv.payoffs;
      rep.shapley.solves = counter.value();
      rep.table = std::move(sv.table);
    }
  }
  for (int r = 0; r < repetitions; ++r) {
    SolveCounter counter;
    opt.solver.counter = &counter;
    const auto t0 = Clock::now();
    auto fc = FastCore(s, opt);
    rep.fast.times_ms.push_back(ms(Clock::now() - t0));
    if (r == 0) {
      rep.fast.payoffs = fc.payoffs;
      rep.fast.solves = counter.value();
    }
  }
  for (MethodResult* m : {&rep.shapley, &rep.fast}) {
    m->total = std::accumulate(m->payoffs.begin(), m->payoffs.end(), 0.0);
    m->median_ms = Median(m->times_ms);
  }
  for (PlayerIndex n = 0; n < s.num_players; ++n) {
    rep.standalone.push_back(rep.table.value(Coalition::Singleton(n)));
  }
  rep.grand_value = rep.table.value(rep.table.grand());
  return rep;
}

}  // namespace edgeshare

#endif  // EDGESHARE_ANALYSIS_HPP_
