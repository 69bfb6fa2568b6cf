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

#ifndef EDGESHARE_ENGINE_HPP_
#define EDGESHARE_ENGINE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "edgeshare/model.hpp"
#include "edgeshare/parallel.hpp"
#include "edgeshare/solver.hpp"
#include "edgeshare/utility.hpp"

namespace edgeshare {

// v(S) for every coalition, indexed by bitmask. v(empty) = 0 is implicit.
class CharacteristicTable {
 public:
  struct Entry {
    bool known = false;
    double value = 0.0;
    std::optional<Allocation> allocation;
    std::vector<double> player_utilities;  // weighted total per player
  };

  CharacteristicTable() = default;
  explicit CharacteristicTable(std::size_t num_players) : num_players_(num_players) {
    if (num_players == 0 || num_players > Coalition::kMaxPlayers) {
      throw std::invalid_argument("CharacteristicTable: player count out of range");
    }
    entries_.resize(std::size_t{1} << num_players);
    entries_[0].known = true;
  }

  // Table from bare values, e.g. hand-entered numbers. values[mask - 1] = v(mask).
  static CharacteristicTable FromValues(std::size_t num_players, const std::vector<double>& values) {
    CharacteristicTable t(num_players);
    if (values.size() != t.entries_.size() - 1) {
      throw std::invalid_argument("CharacteristicTable::FromValues: need 2^N - 1 values");
    }
    for (std::size_t m = 1; m < t.entries_.size(); ++m) t.set(Coalition(m), values[m - 1]);
    return t;
  }

  std::size_t num_players() const { return num_players_; }
  std::size_t size() const { return entries_.size(); }
  Coalition grand() const { return Coalition::Grand(num_players_); }

  bool known(Coalition c) const { return entries_.at(c.mask()).known; }
  double value(Coalition c) const {
    const Entry& e = entries_.at(c.mask());
    if (!e.known) throw std::out_of_range("CharacteristicTable: value not computed");
    return e.value;
  }
  const Entry& entry(Coalition c) const { return entries_.at(c.mask()); }

  void set(Coalition c, double value, std::optional<Allocation> alloc = std::nullopt,
           std::vector<double> player_utilities = {}) {
    if (c.empty()) throw std::invalid_argument("CharacteristicTable: v(empty) is fixed at 0");
    Entry& e = entries_.at(c.mask());
    e.known = true;
    e.value = value;
    e.allocation = std::move(alloc);
    e.player_utilities = std::move(player_utilities);
  }

  bool complete() const {
    for (const auto& e : entries_) {
      if (!e.known) return false;
    }
    return true;
  }

 private:
  std::size_t num_players_ = 0;
  std::vector<Entry> entries_;
};

struct EngineOptions {
  SolverOptions solver{};
  std::size_t workers = 1;
  bool keep_allocations = true;
};

namespace detail {

inline void StoreSolve(CharacteristicTable& table, Coalition c, const Scenario& s,
                       SolveReport report, bool keep) {
  std::vector<double> per_player(s.num_players, 0.0);
  const auto parts = Breakdown(report.allocation, s);
  for (PlayerIndex n : c.members()) per_player[n] = parts[n].weighted_total;
  std::optional<Allocation> alloc;
  if (keep) alloc = std::move(report.allocation);
  table.set(c, report.value, std::move(alloc), std::move(per_player));
}

// Allocations that serve S as two independent halves. Trying them as starts
// makes the nonlinear solver respect v(A u B) >= v(A) + v(B) by construction.
inline std::vector<Allocation> SplitStarts(const CharacteristicTable& table, Coalition c,
                                           std::size_t num_players) {
  std::vector<Allocation> out;
  const std::uint32_t mask = c.mask();
  const bool all_splits = num_players <= 12;
  double best = -std::numeric_limits<double>::infinity();
  std::uint32_t best_sub = 0;
  for (std::uint32_t sub = (mask - 1) & mask; sub != 0; sub = (sub - 1) & mask) {
    const std::uint32_t rest = mask ^ sub;
    if (sub < rest) continue;  // each unordered split once
    if (!all_splits && std::popcount(sub) != 1 && std::popcount(rest) != 1) continue;
    const auto& a = table.entry(Coalition(sub));
    const auto& b = table.entry(Coalition(rest));
    if (!a.allocation || !b.allocation) continue;
    const double v = a.value + b.value;
    if (v > best) {
      best = v;
      best_sub = sub;
    }
  }
  if (best_sub != 0) {
    Allocation combined = *table.entry(Coalition(best_sub)).allocation;
    combined += *table.entry(Coalition(mask ^ best_sub)).allocation;
    out.push_back(std::move(combined));
  }
  return out;
}

}  // namespace detail

// v(S), solving and caching on first use. v(empty) = 0 without a solve.
inline double CharacteristicValue(Coalition c, const Scenario& s, CharacteristicTable& cache,
                                  const EngineOptions& opt = {}) {
  if (c.empty()) return 0.0;
  if (cache.known(c)) return cache.value(c);
  detail::StoreSolve(cache, c, s, SolveCoalition(c, s, opt.solver), opt.keep_allocations);
  return cache.value(c);
}

// Solves all 2^N - 1 coalitions, smallest first, so that every coalition can
// be warm-started from its best two-part split.
inline CharacteristicTable BuildCharacteristicTable(const Scenario& s,
                                                    const EngineOptions& opt = {}) {
  RequireValid(s);
  const std::size_t n = s.num_players;
  CharacteristicTable table(n);
  bool nonlinear = false;
  for (const auto& u : s.utilities) nonlinear = nonlinear || u.kind != UtilityKind::kLinear;
  const bool keep = opt.keep_allocations || nonlinear;

  std::vector<std::vector<std::uint32_t>> by_size(n + 1);
  for (std::uint32_t m = 1; m < (std::uint32_t{1} << n); ++m) {
    by_size[std::popcount(m)].push_back(m);
  }
  for (std::size_t size = 1; size <= n; ++size) {
    const auto& layer = by_size[size];
    std::vector<std::optional<SolveReport>> results(layer.size());
    ParallelFor(layer.size(), opt.workers, [&](std::size_t i) {
      const Coalition c(layer[i]);
      std::vector<Allocation> starts;
      if (nonlinear && size > 1) starts = detail::SplitStarts(table, c, n);
      results[i] = SolveCoalition(c, s, opt.solver, starts);
    });
    for (std::size_t i = 0; i < layer.size(); ++i) {
      detail::StoreSolve(table, Coalition(layer[i]), s, std::move(*results[i]), keep);
    }
  }
  if (!opt.keep_allocations && nonlinear) {
    CharacteristicTable slim(n);
    for (std::uint32_t m = 1; m < (std::uint32_t{1} << n); ++m) {
      const auto& e = table.entry(Coalition(m));
      slim.set(Coalition(m), e.value, std::nullopt, e.player_utilities);
    }
    return slim;
  }
  return table;
}

// phi_n = sum over S not containing n of |S|! (N-|S|-1)! / N! * (v(S+n) - v(S)).
inline PayoffVector ShapleyFromTable(const CharacteristicTable& table) {
  if (!table.complete()) throw std::invalid_argument("ShapleyFromTable: incomplete table");
  const std::size_t n = table.num_players();
  // weight[s] = 1 / (N * C(N-1, s))
  std::vector<double> weight(n);
  double binom = 1.0;
  for (std::size_t s = 0; s < n; ++s) {
    weight[s] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(n - 1 - s) / static_cast<double>(s + 1);
  }
  PayoffVector phi(n, 0.0);
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  for (std::uint32_t m = 0; m <= full; ++m) {
    const Coalition without(m);
    const double base = m == 0 ? 0.0 : table.value(without);
    const std::size_t size = without.size();
    if (size == n) continue;
    for (PlayerIndex p = 0; p < n; ++p) {
      if (without.contains(p)) continue;
      phi[p] += weight[size] * (table.value(without.with(p)) - base);
    }
  }
  return phi;
}

struct ShapleyResult {
  PayoffVector payoffs;
  CharacteristicTable table;
};

// Shapley-based allocation: exactly 2^N - 1 coalition solves.
inline ShapleyResult ShapleyPayoffs(const Scenario& s, const EngineOptions& opt = {}) {
  if (s.num_players > Coalition::kMaxPlayers) {
    throw std::invalid_argument("ShapleyPayoffs: too many players for enumeration");
  }
  auto table = BuildCharacteristicTable(s, opt);
  auto phi = ShapleyFromTable(table);
  return {std::move(phi), std::move(table)};
}

struct FastCoreResult {
  PayoffVector payoffs;
  Allocation allocation;
  std::vector<double> phase1;  // O_1^n: native solve values
  std::vector<double> phase2;  // O_2^n: sharing solve values
  std::vector<PlayerIndex> order;

  double total() const { return std::accumulate(payoffs.begin(), payoffs.end(), 0.0); }
};

// Linear-time core allocation: every provider first serves its own
// applications, then providers take turns (in `order`, ascending by default)
// selling residual capacity to the residual foreign requests. Exactly 2N
// subproblem solves. payoff_n = w_n O_1^n + zeta_n O_2^n.
inline FastCoreResult FastCore(const Scenario& s, const EngineOptions& opt = {},
                               std::vector<PlayerIndex> order = {}) {
  RequireValid(s);
  const std::size_t n = s.num_players;
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), PlayerIndex{0});
  }
  {
    std::vector<PlayerIndex> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (sorted.size() != n || sorted[i] != i) {
        throw std::invalid_argument("FastCore: order must be a permutation of the players");
      }
    }
  }

  FastCoreResult out;
  out.order = order;
  out.allocation = Allocation::Zero(s);
  out.phase1.assign(n, 0.0);
  out.phase2.assign(n, 0.0);

  // Native phase; independent across players.
  std::vector<std::optional<SolveReport>> native(n);
  ParallelFor(n, opt.workers, [&](std::size_t p) {
    native[p] = SolveNative(p, s, s.capacities[p], s.requests[p], opt.solver);
  });

  std::vector<std::vector<double>> caps = s.capacities;
  Matrix residual(s.total_apps(), s.num_resources);
  for (const AppRef& a : s.apps()) {
    const std::size_t g = s.app_offset(a.owner) + a.local;
    for (ResourceIndex k = 0; k < s.num_resources; ++k) residual(g, k) = s.request(a, k);
  }
  auto commit = [&](PlayerIndex p, const Allocation& alloc) {
    const Matrix& x = alloc.by_provider[p];
    for (std::size_t g = 0; g < x.rows(); ++g) {
      for (ResourceIndex k = 0; k < s.num_resources; ++k) {
        const double q = x(g, k);
        if (q == 0.0) continue;
        out.allocation.by_provider[p](g, k) += q;
        caps[p][k] = std::max(0.0, caps[p][k] - q);
        residual(g, k) = std::max(0.0, residual(g, k) - q);
      }
    }
  };
  for (PlayerIndex p = 0; p < n; ++p) {
    out.phase1[p] = native[p]->value;
    commit(p, native[p]->allocation);
  }

  // Sharing phase; sequential because each step consumes residuals.
  for (PlayerIndex p : order) {
    const auto report = SolveResidual(p, s, caps[p], residual, opt.solver);
    out.phase2[p] = report.value;
    commit(p, report.allocation);
  }

  out.payoffs.resize(n);
  for (PlayerIndex p = 0; p < n; ++p) {
    out.payoffs[p] = s.weights[p].own * out.phase1[p] + s.weights[p].shared * out.phase2[p];
  }
  return out;
}

}  // namespace edgeshare

#endif  // EDGESHARE_ENGINE_HPP_
