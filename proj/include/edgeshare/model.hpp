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

#ifndef EDGESHARE_MODEL_HPP_
#define EDGESHARE_MODEL_HPP_

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgeshare/matrix.hpp"

namespace edgeshare {

using PlayerIndex = std::size_t;
using ResourceIndex = std::size_t;

// An application, identified by its native provider and its row in that
// provider's request matrix.
struct AppRef {
  PlayerIndex owner = 0;
  std::size_t local = 0;

  friend bool operator==(const AppRef&, const AppRef&) = default;
};

enum class UtilityKind { kLinear, kSigmoid };

inline const char* ToString(UtilityKind kind) {
  return kind == UtilityKind::kLinear ? "linear" : "sigmoid";
}

// Per-player utility family. Linear utilities carry one coefficient per
// (native application, resource); an empty coefficient matrix means all ones.
struct UtilitySpec {
  UtilityKind kind = UtilityKind::kLinear;
  double mu = 1.0;
  Matrix coeffs;

  static UtilitySpec Linear(Matrix c = {}) { return {UtilityKind::kLinear, 1.0, std::move(c)}; }
  static UtilitySpec Sigmoid(double mu) { return {UtilityKind::kSigmoid, mu, {}}; }

  double coeff(std::size_t app, ResourceIndex k) const {
    return coeffs.empty() ? 1.0 : coeffs(app, k);
  }

  friend bool operator==(const UtilitySpec&, const UtilitySpec&) = default;
};

struct Weights {
  double own = 1.0;     // w_n
  double shared = 1.0;  // zeta_n

  friend bool operator==(const Weights&, const Weights&) = default;
};

// A full game instance. The per-player lists are kept separate so that a
// malformed instance (e.g. read from disk) can be represented and diagnosed.
struct Scenario {
  std::size_t num_players = 0;
  std::size_t num_resources = 0;
  std::vector<std::vector<double>> capacities;  // [n][k]
  std::vector<Matrix> requests;                 // [n] is M_n x K
  std::vector<UtilitySpec> utilities;
  std::vector<Weights> weights;
  std::optional<std::uint64_t> seed;

  std::size_t num_apps(PlayerIndex n) const { return requests[n].rows(); }

  std::size_t total_apps() const {
    std::size_t total = 0;
    for (const auto& r : requests) total += r.rows();
    return total;
  }

  // Global index of player n's first application. Applications are numbered
  // owner-major: all of player 0's, then player 1's, and so on.
  std::size_t app_offset(PlayerIndex n) const {
    std::size_t off = 0;
    for (PlayerIndex m = 0; m < n; ++m) off += requests[m].rows();
    return off;
  }

  std::vector<AppRef> apps() const {
    std::vector<AppRef> out;
    out.reserve(total_apps());
    for (PlayerIndex n = 0; n < requests.size(); ++n) {
      for (std::size_t i = 0; i < requests[n].rows(); ++i) out.push_back({n, i});
    }
    return out;
  }

  double request(const AppRef& a, ResourceIndex k) const { return requests[a.owner](a.local, k); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Set of players as a bitmask. Bit n set means player n is a member.
class Coalition {
 public:
  static constexpr std::size_t kMaxPlayers = 24;

  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint32_t mask) : mask_(mask) {
    if (mask >= (std::uint32_t{1} << kMaxPlayers)) {
      throw std::out_of_range("Coalition: mask exceeds player bound");
    }
  }

  static Coalition Singleton(PlayerIndex n) { return Coalition(std::uint32_t{1} << n); }
  static Coalition Grand(std::size_t num_players) {
    if (num_players > kMaxPlayers) throw std::out_of_range("Coalition: too many players");
    return Coalition((std::uint32_t{1} << num_players) - 1);
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(PlayerIndex n) const { return (mask_ >> n) & 1u; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

  std::vector<PlayerIndex> members() const {
    std::vector<PlayerIndex> out;
    for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
      out.push_back(static_cast<PlayerIndex>(std::countr_zero(m)));
    }
    return out;
  }

  Coalition with(PlayerIndex n) const { return Coalition(mask_ | (std::uint32_t{1} << n)); }
  Coalition without(PlayerIndex n) const { return Coalition(mask_ & ~(std::uint32_t{1} << n)); }
  bool disjoint(Coalition other) const { return (mask_ & other.mask_) == 0; }
  Coalition operator|(Coalition other) const { return Coalition(mask_ | other.mask_); }

  friend constexpr bool operator==(Coalition, Coalition) = default;
  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  std::uint32_t mask_ = 0;
};

// X = {X^(n)}: by_provider[n](i, k) is the amount of provider n's resource k
// given to global application i.
struct Allocation {
  std::vector<Matrix> by_provider;

  static Allocation Zero(const Scenario& s) {
    Allocation a;
    a.by_provider.assign(s.num_players, Matrix(s.total_apps(), s.num_resources));
    return a;
  }

  // Total amount application i receives of resource k across providers.
  double received(std::size_t app, ResourceIndex k) const {
    double total = 0.0;
    for (const auto& x : by_provider) total += x(app, k);
    return total;
  }

  Allocation& operator+=(const Allocation& other) {
    for (std::size_t n = 0; n < by_provider.size(); ++n) {
      auto dst = by_provider[n].data();
      auto src = other.by_provider[n].data();
      for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += src[e];
    }
    return *this;
  }
};

using PayoffVector = std::vector<double>;

// Returns one human-readable message per violated invariant; empty when the
// scenario is well formed.
inline std::vector<std::string> ValidateScenario(const Scenario& s) {
  std::vector<std::string> out;
  const std::size_t n = s.num_players;
  if (n == 0) out.emplace_back("player count: scenario has no players");
  if (n > Coalition::kMaxPlayers) {
    out.emplace_back("player count: more than " + std::to_string(Coalition::kMaxPlayers) +
                     " players");
  }
  if (s.num_resources == 0) out.emplace_back("resource count: scenario has no resources");
  if (s.capacities.size() != n || s.requests.size() != n || s.utilities.size() != n ||
      s.weights.size() != n) {
    out.emplace_back("player count: per-player lists do not all have length " +
                     std::to_string(n));
    return out;
  }
  for (PlayerIndex p = 0; p < n; ++p) {
    const std::string who = "player " + std::to_string(p + 1) + ": ";
    if (s.capacities[p].size() != s.num_resources) {
      out.push_back(who + "capacity length differs from resource count");
    }
    for (double c : s.capacities[p]) {
      if (!(c >= 0.0) || !std::isfinite(c)) {
        out.push_back(who + "negative capacity");
        break;
      }
    }
    const Matrix& r = s.requests[p];
    if (r.rows() == 0) out.push_back(who + "no applications");
    if (r.rows() > 0 && r.cols() != s.num_resources) {
      out.push_back(who + "request matrix width differs from resource count");
    }
    for (double v : r.data()) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        out.push_back(who + "negative request");
        break;
      }
    }
    const UtilitySpec& u = s.utilities[p];
    if (u.kind == UtilityKind::kSigmoid && !(u.mu > 0.0 && std::isfinite(u.mu))) {
      out.push_back(who + "sigmoid steepness must be positive");
    }
    if (u.kind == UtilityKind::kLinear && !u.coeffs.empty()) {
      if (u.coeffs.rows() != r.rows() || u.coeffs.cols() != r.cols()) {
        out.push_back(who + "linear coefficient shape differs from request matrix");
      }
      for (double c : u.coeffs.data()) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
          out.push_back(who + "negative utility coefficient");
          break;
        }
      }
    }
    const Weights& w = s.weights[p];
    if (!(w.own >= 0.0) || !(w.shared >= 0.0) || !std::isfinite(w.own) ||
        !std::isfinite(w.shared)) {
      out.push_back(who + "negative weight");
    }
  }
  return out;
}

inline void RequireValid(const Scenario& s) {
  auto problems = ValidateScenario(s);
  if (!problems.empty()) throw std::invalid_argument("invalid scenario: " + problems.front());
}

struct GeneratorParams {
  std::size_t players = 3;
  std::size_t resources = 3;
  std::size_t apps_per_player = 3;
  UtilityKind utility = UtilityKind::kLinear;
  double mu = 0.01;
  std::uint64_t seed = 0;
  Weights weights{};
};

namespace detail {

// Uniform double in [lo, hi] from the top 53 bits of a 64-bit draw, so the
// stream is identical across standard library implementations.
inline double UniformDraw(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

}  // namespace detail

// Requests are uniform on [1, 10]; capacity of resource k is uniform on
// [0.5 D, 1.5 D] where D is the player's native demand for k, so some players
// end up with a surplus and others with a deficit.
inline Scenario GenerateScenario(const GeneratorParams& p) {
  if (p.players == 0 || p.players > Coalition::kMaxPlayers) {
    throw std::invalid_argument("GenerateScenario: players must be in [1, 24]");
  }
  if (p.resources == 0) throw std::invalid_argument("GenerateScenario: resources must be >= 1");
  if (p.apps_per_player == 0) {
    throw std::invalid_argument("GenerateScenario: apps per player must be >= 1");
  }
  if (p.utility == UtilityKind::kSigmoid && !(p.mu > 0.0)) {
    throw std::invalid_argument("GenerateScenario: mu must be positive");
  }
  std::mt19937_64 rng(p.seed);
  Scenario s;
  s.num_players = p.players;
  s.num_resources = p.resources;
  s.seed = p.seed;
  for (PlayerIndex n = 0; n < p.players; ++n) {
    Matrix req(p.apps_per_player, p.resources);
    for (double& v : req.data()) v = detail::UniformDraw(rng, 1.0, 10.0);
    std::vector<double> cap(p.resources);
    for (ResourceIndex k = 0; k < p.resources; ++k) {
      double demand = 0.0;
      for (std::size_t i = 0; i < p.apps_per_player; ++i) demand += req(i, k);
      cap[k] = detail::UniformDraw(rng, 0.5 * demand, 1.5 * demand);
    }
    s.capacities.push_back(std::move(cap));
    s.requests.push_back(std::move(req));
    s.utilities.push_back(p.utility == UtilityKind::kLinear ? UtilitySpec::Linear()
                                                            : UtilitySpec::Sigmoid(p.mu));
    s.weights.push_back(p.weights);
  }
  return s;
}

}  // namespace edgeshare

#endif  // EDGESHARE_MODEL_HPP_
