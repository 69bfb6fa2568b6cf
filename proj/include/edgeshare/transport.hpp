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

#ifndef EDGESHARE_TRANSPORT_HPP_
#define EDGESHARE_TRANSPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "edgeshare/matrix.hpp"

namespace edgeshare {

// Exact linear maximization over the transportation polytope
//
//   max  sum_{u,a} profit(u,a) x(u,a)
//   s.t. sum_a x(u,a) <= supplies[u],  sum_u x(u,a) <= demands[a],  x >= 0.
//
// Solved as a max-profit flow source -> supplier -> application -> sink by
// successive shortest paths with Johnson potentials. Augmentation stops as
// soon as the best remaining path has no positive profit, so zero-profit
// entries stay empty. Dijkstra pops nodes by (distance, index), which breaks
// ties toward low indices and keeps the returned vertex deterministic.
inline Matrix LmoTransport(const Matrix& profit, std::span<const double> supplies,
                           std::span<const double> demands) {
  const std::size_t nu = supplies.size();
  const std::size_t na = demands.size();
  if (profit.rows() != nu || profit.cols() != na) {
    throw std::invalid_argument("LmoTransport: profit shape does not match supplies x demands");
  }
  Matrix x(nu, na);
  if (nu == 0 || na == 0) return x;

  double scale = 1.0;
  for (double v : supplies) {
    if (!(v >= 0.0)) throw std::invalid_argument("LmoTransport: negative supply");
    scale = std::max(scale, v);
  }
  for (double v : demands) {
    if (!(v >= 0.0)) throw std::invalid_argument("LmoTransport: negative demand");
    scale = std::max(scale, v);
  }
  double pscale = 1.0;
  for (double p : profit.data()) {
    if (!std::isfinite(p)) throw std::invalid_argument("LmoTransport: non-finite profit");
    pscale = std::max(pscale, std::abs(p));
  }
  const double cap_eps = 1e-12 * scale;
  const double cost_eps = 1e-12 * pscale;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Node layout: 0 source, 1..nu suppliers, nu+1..nu+na applications, sink.
  const std::size_t source = 0;
  const std::size_t sink = nu + na + 1;
  const std::size_t nodes = nu + na + 2;
  auto sup = [](std::size_t u) { return 1 + u; };
  auto app = [nu](std::size_t a) { return 1 + nu + a; };

  std::vector<double> out_flow(nu, 0.0), in_flow(na, 0.0);

  // Initial potentials are exact shortest distances on the (acyclic) initial
  // residual graph, whose only negative arcs are supplier -> application.
  std::vector<double> pot(nodes, 0.0);
  double pot_sink = kInf;
  for (std::size_t a = 0; a < na; ++a) {
    double best = kInf;
    for (std::size_t u = 0; u < nu; ++u) best = std::min(best, -profit(u, a));
    pot[app(a)] = best;
    pot_sink = std::min(pot_sink, best);
  }
  pot[sink] = pot_sink;

  std::vector<double> dist(nodes);
  std::vector<std::size_t> parent(nodes);
  std::vector<char> done(nodes);
  using Item = std::pair<double, std::size_t>;

  for (;;) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);

    auto relax = [&](std::size_t from, std::size_t to, double cost) {
      if (done[to]) return;
      double reduced = cost + pot[from] - pot[to];
      if (reduced < 0.0) reduced = 0.0;  // round-off only
      const double nd = dist[from] + reduced;
      if (nd < dist[to]) {
        dist[to] = nd;
        parent[to] = from;
        heap.emplace(nd, to);
      }
    };

    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (done[v] || d > dist[v]) continue;
      done[v] = 1;
      if (v == sink) break;
      if (v == source) {
        for (std::size_t u = 0; u < nu; ++u) {
          if (supplies[u] - out_flow[u] > cap_eps) relax(source, sup(u), 0.0);
        }
      } else if (v <= nu) {
        const std::size_t u = v - 1;
        for (std::size_t a = 0; a < na; ++a) relax(v, app(a), -profit(u, a));
        if (out_flow[u] > cap_eps) relax(v, source, 0.0);
      } else {
        const std::size_t a = v - 1 - nu;
        for (std::size_t u = 0; u < nu; ++u) {
          if (x(u, a) > cap_eps) relax(v, sup(u), profit(u, a));
        }
        if (demands[a] - in_flow[a] > cap_eps) relax(v, sink, 0.0);
      }
    }
    if (!done[sink]) break;

    const double path_cost = dist[sink] + pot[sink] - pot[source];
    if (path_cost >= -cost_eps) break;

    // Distances truncated at the sink distance keep every reduced cost
    // nonnegative, including for nodes the search never settled.
    for (std::size_t v = 0; v < nodes; ++v) pot[v] += std::min(dist[v], dist[sink]);

    double push = kInf;
    for (std::size_t v = sink; v != source; v = parent[v]) {
      const std::size_t p = parent[v];
      if (v == sink) {
        const std::size_t a = p - 1 - nu;
        push = std::min(push, demands[a] - in_flow[a]);
      } else if (p == source) {
        const std::size_t u = v - 1;
        push = std::min(push, supplies[u] - out_flow[u]);
      } else if (p > nu && v <= nu && v >= 1) {
        push = std::min(push, x(v - 1, p - 1 - nu));
      }
    }
    for (std::size_t v = sink; v != source; v = parent[v]) {
      const std::size_t p = parent[v];
      if (v == sink) {
        in_flow[p - 1 - nu] += push;
      } else if (p == source) {
        out_flow[v - 1] += push;
      } else if (p >= 1 && p <= nu) {
        double& e = x(p - 1, v - 1 - nu);
        e += push;
      } else {
        double& e = x(v - 1, p - 1 - nu);
        e -= push;
        if (e < cap_eps) e = 0.0;
      }
    }
  }

  // Remove accumulated round-off so the result sits inside the polytope.
  for (std::size_t u = 0; u < nu; ++u) {
    double row = 0.0;
    for (std::size_t a = 0; a < na; ++a) row += x(u, a);
    if (row > supplies[u] && row > 0.0) {
      const double f = supplies[u] / row;
      for (std::size_t a = 0; a < na; ++a) x(u, a) *= f;
    }
  }
  for (std::size_t a = 0; a < na; ++a) {
    double col = 0.0;
    for (std::size_t u = 0; u < nu; ++u) col += x(u, a);
    if (col > demands[a] && col > 0.0) {
      const double f = demands[a] / col;
      for (std::size_t u = 0; u < nu; ++u) x(u, a) *= f;
    }
  }
  return x;
}

}  // namespace edgeshare

#endif  // EDGESHARE_TRANSPORT_HPP_
