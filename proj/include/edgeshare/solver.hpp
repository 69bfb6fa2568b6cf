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

#ifndef EDGESHARE_SOLVER_HPP_
#define EDGESHARE_SOLVER_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "edgeshare/model.hpp"
#include "edgeshare/transport.hpp"
#include "edgeshare/utility.hpp"

namespace edgeshare {

// Number of optimization subproblems solved during one pipeline run.
class SolveCounter {
 public:
  void add(std::uint64_t n = 1) { count_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t value() const { return count_.load(std::memory_order_relaxed); }
  void reset() { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

struct SolverOptions {
  int restarts = 16;         // starts per nonlinear solve, warm start included
  int max_iterations = 500;  // Frank-Wolfe iterations per start
  double gap_tolerance = 1e-6;
  SolveCounter* counter = nullptr;
};

enum class SolverKind { kExactLinear, kMultiStartFW };

inline const char* ToString(SolverKind k) {
  return k == SolverKind::kExactLinear ? "exact-linear" : "multistart-fw";
}

struct SolveReport {
  double value = 0.0;
  Allocation allocation;
  SolverKind solver_kind = SolverKind::kExactLinear;
  int restarts_used = 0;
  int iterations = 0;
  double gap = 0.0;  // Frank-Wolfe duality gap at the returned point (0 when exact)
  std::chrono::nanoseconds wall_time{0};
};

// One resource type of an allocation problem, restricted to the suppliers and
// applications that take part in it.
//
// Each application a receives x(u, a) from supplier slot u. Its contribution
// to the objective is
//
//   base_weight[a] * f_a(base[a])
//     + sum over suppliers u in credit order of weight(u, a) * (f_a(P_u) - f_a(P_prev)),
//
// where P is the running receipt starting at base[a] and the credit order is
// the owner's slot first, then the remaining slots ascending.
struct ResourceProblem {
  std::vector<double> supply;
  std::vector<double> demand;
  std::vector<EntryUtility> utility;
  std::vector<double> base;
  std::vector<double> base_weight;
  std::vector<std::ptrdiff_t> owner_slot;  // -1 when the owner does not supply
  Matrix weight;

  std::size_t suppliers() const { return supply.size(); }
  std::size_t apps() const { return demand.size(); }

  bool linear() const {
    return std::all_of(utility.begin(), utility.end(),
                       [](const EntryUtility& f) { return f.kind == UtilityKind::kLinear; });
  }

  template <typename Visit>
  void ForEachInOrder(std::size_t a, Visit&& visit) const {
    const std::ptrdiff_t own = owner_slot[a];
    if (own >= 0) visit(static_cast<std::size_t>(own));
    for (std::size_t u = 0; u < suppliers(); ++u) {
      if (static_cast<std::ptrdiff_t>(u) != own) visit(u);
    }
  }

  double Objective(const Matrix& x) const {
    double total = 0.0;
    for (std::size_t a = 0; a < apps(); ++a) {
      const EntryUtility& f = utility[a];
      double level = base[a];
      double prev = f.value(level);
      double v = base_weight[a] * prev;
      ForEachInOrder(a, [&](std::size_t u) {
        const double q = x(u, a);
        if (q == 0.0) return;
        level += q;
        const double cur = f.value(level);
        v += weight(u, a) * (cur - prev);
        prev = cur;
      });
      total += v;
    }
    return total;
  }

  void Gradient(const Matrix& x, Matrix& grad) const {
    grad = Matrix(suppliers(), apps());
    std::vector<std::size_t> order;
    std::vector<double> slope_after;
    for (std::size_t a = 0; a < apps(); ++a) {
      const EntryUtility& f = utility[a];
      order.clear();
      slope_after.clear();
      double level = base[a];
      const double slope_base = f.slope(level);
      ForEachInOrder(a, [&](std::size_t u) {
        level += x(u, a);
        order.push_back(u);
        slope_after.push_back(f.slope(level));
      });
      // d/dx_m = w_m f'(P_m) + sum_{u after m} w_u (f'(P_u) - f'(P_{u-1}))
      double suffix = 0.0;
      for (std::size_t j = order.size(); j-- > 0;) {
        const std::size_t u = order[j];
        const double before = j == 0 ? slope_base : slope_after[j - 1];
        grad(u, a) = weight(u, a) * slope_after[j] + suffix;
        suffix += weight(u, a) * (slope_after[j] - before);
      }
    }
  }
};

struct ResourceSolution {
  Matrix x;
  double value = 0.0;
  int iterations = 0;
  int restarts = 0;
  double gap = 0.0;
};

namespace detail {

inline std::uint64_t Mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finalizer over the running hash
  std::uint64_t z = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double MaxRelativeGap(double gap, double value) {
  return gap / std::max(1.0, std::abs(value));
}

// Best step along x + t * dir for t in [0, 1]; the objective is not concave so
// a coarse grid locates the basin before a golden-section refinement.
inline double LineSearch(const ResourceProblem& p, const Matrix& x, const Matrix& dir,
                         double f0, double& best_value) {
  Matrix trial = x;
  auto eval = [&](double t) {
    auto dst = trial.data();
    auto src = x.data();
    auto d = dir.data();
    for (std::size_t e = 0; e < dst.size(); ++e) dst[e] = std::max(0.0, src[e] + t * d[e]);
    return p.Objective(trial);
  };
  constexpr int kGrid = 16;
  double best_t = 0.0;
  best_value = f0;
  for (int j = 1; j <= kGrid; ++j) {
    const double t = static_cast<double>(j) / kGrid;
    const double v = eval(t);
    if (v > best_value) {
      best_value = v;
      best_t = t;
    }
  }
  double lo = std::max(0.0, best_t - 1.0 / kGrid);
  double hi = std::min(1.0, best_t + 1.0 / kGrid);
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = eval(c), fd = eval(d);
  for (int it = 0; it < 40 && hi - lo > 1e-10; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = eval(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = eval(d);
    }
  }
  if (fc > best_value) {
    best_value = fc;
    best_t = c;
  }
  if (fd > best_value) {
    best_value = fd;
    best_t = d;
  }
  return best_t;
}

struct FwOutcome {
  Matrix x;
  double value;
  int iterations;
  double gap;
};

inline FwOutcome FrankWolfe(const ResourceProblem& p, Matrix x, const SolverOptions& opt) {
  double value = p.Objective(x);
  Matrix grad, dir(p.suppliers(), p.apps());
  double gap = 0.0;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    p.Gradient(x, grad);
    const Matrix vertex = LmoTransport(grad, p.supply, p.demand);
    gap = 0.0;
    for (std::size_t e = 0; e < dir.data().size(); ++e) {
      dir.data()[e] = vertex.data()[e] - x.data()[e];
      gap += grad.data()[e] * dir.data()[e];
    }
    if (gap <= opt.gap_tolerance) break;
    double next = value;
    const double t = LineSearch(p, x, dir, value, next);
    if (t <= 0.0 || next <= value + 1e-15 * std::max(1.0, std::abs(value))) break;
    for (std::size_t e = 0; e < dir.data().size(); ++e) {
      x.data()[e] = std::max(0.0, x.data()[e] + t * dir.data()[e]);
    }
    value = p.Objective(x);
  }
  return {std::move(x), value, it, std::max(0.0, gap)};
}

}  // namespace detail

// Solves one resource problem. Linear problems are a single exact LMO call.
// Otherwise Frank-Wolfe runs from `restarts` starts: the exact optimum of the
// secant-linearized problem, then random points between two random vertices;
// any caller-supplied starts follow. The best end point wins, earlier on ties.
inline ResourceSolution SolveResourceProblem(const ResourceProblem& p, const SolverOptions& opt,
                                             std::uint64_t seed,
                                             std::span<const Matrix> extra_starts = {}) {
  ResourceSolution best;
  if (p.linear()) {
    Matrix profit(p.suppliers(), p.apps());
    for (std::size_t u = 0; u < p.suppliers(); ++u) {
      for (std::size_t a = 0; a < p.apps(); ++a) {
        profit(u, a) = p.weight(u, a) * p.utility[a].coeff;
      }
    }
    best.x = LmoTransport(profit, p.supply, p.demand);
    best.value = p.Objective(best.x);
    for (const Matrix& start : extra_starts) {
      const double v = p.Objective(start);
      if (v > best.value) {
        best.x = start;
        best.value = v;
      }
    }
    return best;
  }

  auto consider = [&](Matrix start) {
    auto out = detail::FrankWolfe(p, std::move(start), opt);
    best.iterations += out.iterations;
    ++best.restarts;
    if (best.restarts == 1 || out.value > best.value) {
      best.value = out.value;
      best.x = std::move(out.x);
      best.gap = out.gap;
    }
  };

  {
    Matrix secant(p.suppliers(), p.apps());
    for (std::size_t a = 0; a < p.apps(); ++a) {
      const EntryUtility& f = p.utility[a];
      const double lo = p.base[a];
      const double span = p.demand[a];
      const double slope = span > 0.0 ? (f.value(lo + span) - f.value(lo)) / span : f.slope(lo);
      for (std::size_t u = 0; u < p.suppliers(); ++u) secant(u, a) = p.weight(u, a) * slope;
    }
    consider(LmoTransport(secant, p.supply, p.demand));
  }

  std::mt19937_64 rng(seed);
  for (int r = 1; r < opt.restarts; ++r) {
    Matrix pa(p.suppliers(), p.apps()), pb(p.suppliers(), p.apps());
    for (double& v : pa.data()) v = edgeshare::detail::UniformDraw(rng, 0.0, 1.0);
    for (double& v : pb.data()) v = edgeshare::detail::UniformDraw(rng, 0.0, 1.0);
    const double lambda = edgeshare::detail::UniformDraw(rng, 0.0, 1.0);
    const Matrix va = LmoTransport(pa, p.supply, p.demand);
    const Matrix vb = LmoTransport(pb, p.supply, p.demand);
    Matrix start(p.suppliers(), p.apps());
    for (std::size_t e = 0; e < start.data().size(); ++e) {
      start.data()[e] = lambda * va.data()[e] + (1.0 - lambda) * vb.data()[e];
    }
    consider(std::move(start));
  }
  for (const Matrix& start : extra_starts) consider(start);
  return best;
}

namespace detail {

inline std::uint64_t ProblemSeed(const Scenario& s, std::uint64_t tag, std::uint64_t id,
                                 ResourceIndex k) {
  std::uint64_t h = Mix(0x5eed5eed5eedULL, s.seed.value_or(0));
  h = Mix(h, tag);
  h = Mix(h, id);
  return Mix(h, k);
}

inline void Absorb(SolveReport& report, const ResourceSolution& sol) {
  report.value += sol.value;
  report.iterations += sol.iterations;
  report.restarts_used = std::max(report.restarts_used, sol.restarts);
  report.gap = std::max(report.gap, sol.gap);
}

inline SolveReport NativeSolve(PlayerIndex n, const Scenario& s, std::span<const double> caps,
                               const Matrix& reqs, const SolverOptions& opt) {
  if (n >= s.num_players) throw std::out_of_range("SolveNative: player index");
  if (caps.size() != s.num_resources || reqs.rows() != s.num_apps(n) ||
      reqs.cols() != s.num_resources) {
    throw std::invalid_argument("SolveNative: capacity/request shape mismatch");
  }
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.allocation = Allocation::Zero(s);
  const std::size_t m = s.num_apps(n);
  const std::size_t off = s.app_offset(n);
  bool all_linear = true;
  for (ResourceIndex k = 0; k < s.num_resources; ++k) {
    ResourceProblem p;
    p.supply = {caps[k]};
    p.weight = Matrix(1, m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      p.demand.push_back(reqs(i, k));
      p.utility.push_back(EntryFor(s, {n, i}, k));
      p.base.push_back(0.0);
      p.base_weight.push_back(1.0);
      p.owner_slot.push_back(0);
    }
    all_linear = all_linear && p.linear();
    const auto sol = SolveResourceProblem(p, opt, ProblemSeed(s, 1, n, k));
    Absorb(report, sol);
    for (std::size_t i = 0; i < m; ++i) report.allocation.by_provider[n](off + i, k) = sol.x(0, i);
  }
  report.solver_kind = all_linear ? SolverKind::kExactLinear : SolverKind::kMultiStartFW;
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

}  // namespace detail

// Single provider, no sharing: maximize u_n over its own applications subject
// to its (possibly residual) capacities and requests. The value is unweighted.
inline SolveReport SolveNative(PlayerIndex n, const Scenario& s, std::span<const double> caps,
                               const Matrix& reqs, const SolverOptions& opt = {}) {
  auto report = detail::NativeSolve(n, s, caps, reqs, opt);
  if (opt.counter) opt.counter->add();
  return report;
}

// Maximizes the weighted coalition objective over S's providers and S's
// applications. `warm_starts` are optional feasible allocations for S tried in
// addition to the solver's own starts.
inline SolveReport SolveCoalition(Coalition coalition, const Scenario& s,
                                  const SolverOptions& opt = {},
                                  std::span<const Allocation> warm_starts = {}) {
  if (coalition.empty()) throw std::invalid_argument("SolveCoalition: empty coalition");
  const auto members = coalition.members();
  if (members.back() >= s.num_players) throw std::out_of_range("SolveCoalition: player index");
  if (opt.counter) opt.counter->add();

  if (members.size() == 1) {
    const PlayerIndex n = members.front();
    auto report = detail::NativeSolve(n, s, s.capacities[n], s.requests[n], opt);
    report.value *= s.weights[n].own;
    return report;
  }

  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.allocation = Allocation::Zero(s);

  struct Slot {
    AppRef app;
    std::size_t global;
  };
  std::vector<Slot> slots;
  for (std::size_t u = 0; u < members.size(); ++u) {
    const PlayerIndex n = members[u];
    const std::size_t off = s.app_offset(n);
    for (std::size_t i = 0; i < s.num_apps(n); ++i) slots.push_back({{n, i}, off + i});
  }
  std::vector<std::ptrdiff_t> owner_slot;
  for (const Slot& sl : slots) {
    const auto it = std::find(members.begin(), members.end(), sl.app.owner);
    owner_slot.push_back(it - members.begin());
  }

  bool all_linear = true;
  for (ResourceIndex k = 0; k < s.num_resources; ++k) {
    ResourceProblem p;
    p.owner_slot = owner_slot;
    p.weight = Matrix(members.size(), slots.size());
    for (std::size_t u = 0; u < members.size(); ++u) p.supply.push_back(s.capacities[members[u]][k]);
    for (std::size_t a = 0; a < slots.size(); ++a) {
      const Slot& sl = slots[a];
      const Weights& ow = s.weights[sl.app.owner];
      p.demand.push_back(s.request(sl.app, k));
      p.utility.push_back(EntryFor(s, sl.app, k));
      p.base.push_back(0.0);
      p.base_weight.push_back(ow.own);
      for (std::size_t u = 0; u < members.size(); ++u) {
        p.weight(u, a) = members[u] == sl.app.owner ? ow.own : s.weights[members[u]].shared;
      }
    }
    std::vector<Matrix> extra;
    for (const Allocation& w : warm_starts) {
      Matrix x(members.size(), slots.size());
      for (std::size_t u = 0; u < members.size(); ++u) {
        for (std::size_t a = 0; a < slots.size(); ++a) {
          x(u, a) = w.by_provider[members[u]](slots[a].global, k);
        }
      }
      extra.push_back(std::move(x));
    }
    all_linear = all_linear && p.linear();
    const auto sol =
        SolveResourceProblem(p, opt, detail::ProblemSeed(s, 2, coalition.mask(), k), extra);
    detail::Absorb(report, sol);
    for (std::size_t u = 0; u < members.size(); ++u) {
      for (std::size_t a = 0; a < slots.size(); ++a) {
        report.allocation.by_provider[members[u]](slots[a].global, k) = sol.x(u, a);
      }
    }
  }
  report.solver_kind = all_linear ? SolverKind::kExactLinear : SolverKind::kMultiStartFW;
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

// Sharing step for provider n: maximize its income sum_{j != n} u_j^n from
// foreign applications' residual requests using residual capacity. Residual
// requests are indexed by global application (total_apps x K) and the amount
// each application has already received is taken as original request minus
// residual request. The value is unweighted.
inline SolveReport SolveResidual(PlayerIndex n, const Scenario& s,
                                 std::span<const double> residual_caps,
                                 const Matrix& residual_reqs, const SolverOptions& opt = {}) {
  if (n >= s.num_players) throw std::out_of_range("SolveResidual: player index");
  const std::size_t total = s.total_apps();
  if (residual_caps.size() != s.num_resources || residual_reqs.rows() != total ||
      residual_reqs.cols() != s.num_resources) {
    throw std::invalid_argument("SolveResidual: residual shape mismatch");
  }
  if (opt.counter) opt.counter->add();
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.allocation = Allocation::Zero(s);

  const auto apps = s.apps();
  std::vector<std::size_t> foreign;
  for (std::size_t g = 0; g < total; ++g) {
    if (apps[g].owner != n) foreign.push_back(g);
  }
  bool all_linear = true;
  for (ResourceIndex k = 0; k < s.num_resources; ++k) {
    ResourceProblem p;
    p.supply = {residual_caps[k]};
    p.weight = Matrix(1, foreign.size(), 1.0);
    for (std::size_t g : foreign) {
      const double req = s.request(apps[g], k);
      const double left = std::max(0.0, residual_reqs(g, k));
      p.demand.push_back(left);
      p.utility.push_back(EntryFor(s, apps[g], k));
      p.base.push_back(std::max(0.0, req - left));
      p.base_weight.push_back(0.0);
      p.owner_slot.push_back(-1);
    }
    all_linear = all_linear && p.linear();
    const auto sol = SolveResourceProblem(p, opt, detail::ProblemSeed(s, 3, n, k));
    detail::Absorb(report, sol);
    for (std::size_t a = 0; a < foreign.size(); ++a) {
      report.allocation.by_provider[n](foreign[a], k) = sol.x(0, a);
    }
  }
  report.solver_kind = all_linear ? SolverKind::kExactLinear : SolverKind::kMultiStartFW;
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

}  // namespace edgeshare

#endif  // EDGESHARE_SOLVER_HPP_
