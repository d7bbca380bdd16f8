// Exact transportation solver: successive shortest augmenting paths over the
// bipartite residual graph between excess and deficit nodes. Flow amounts
// stay rational regardless of the cost scalar, so termination is driven by
// exact supply bookkeeping even on float spaces.
#pragma once

#include "freelab/num.hpp"

#include <stdexcept>
#include <tuple>
#include <vector>

namespace freelab::detail {

template <class S>
struct TransportSolution {
  S cost{};
  // Optimal shipment arcs (from node, to node, positive rational amount).
  std::vector<std::tuple<int, int, Rational>> arcs;
};

/// Minimum-cost balancing of `supply` (must sum to zero) where shipping one
/// unit from node i to node j costs cost(i,j) >= 0. Node counts are small;
/// Bellman-Ford shortest paths are recomputed per augmentation.
template <class S, class CostFn>
TransportSolution<S> transport_solve(std::vector<Rational> supply, const CostFn& cost) {
  using T = ScalarTraits<S>;
  const int n = static_cast<int>(supply.size());

  std::vector<int> sources, sinks;
  for (int i = 0; i < n; ++i) {
    if (supply[i] > 0) sources.push_back(i);
    else if (supply[i] < 0) sinks.push_back(i);
  }
  TransportSolution<S> out;
  out.cost = T::zero();
  if (sources.empty() && sinks.empty()) return out;
  if (sources.empty() || sinks.empty())
    throw std::logic_error("transport: supplies do not balance");

  const int ns = static_cast<int>(sources.size());
  const int nt = static_cast<int>(sinks.size());
  std::vector<Rational> flow(static_cast<std::size_t>(ns) * nt, Rational(0));
  std::vector<Rational> rem_src(ns), rem_snk(nt);
  for (int a = 0; a < ns; ++a) rem_src[a] = supply[sources[a]];
  for (int b = 0; b < nt; ++b) rem_snk[b] = -supply[sinks[b]];

  std::vector<S> cst(static_cast<std::size_t>(ns) * nt);
  for (int a = 0; a < ns; ++a)
    for (int b = 0; b < nt; ++b) cst[a * nt + b] = cost(sources[a], sinks[b]);

  // Node ids: 0..ns-1 sources, ns..ns+nt-1 sinks.
  const int nodes = ns + nt;
  std::vector<S> dist(nodes, T::zero());
  std::vector<char> reached(nodes);
  std::vector<int> pred(nodes);

  // On float costs a relaxation must win by a margin, otherwise rounding
  // noise can spin the predecessor graph into a cycle.
  auto improves = [](const S& cand, const S& cur) {
    if constexpr (T::exact) return cand < cur;
    else return cand < cur - T::eps;
  };

  while (true) {
    int live_src = -1;
    for (int a = 0; a < ns; ++a)
      if (rem_src[a] > 0) { live_src = a; break; }
    if (live_src < 0) break;

    std::fill(reached.begin(), reached.end(), 0);
    std::fill(pred.begin(), pred.end(), -1);
    for (int a = 0; a < ns; ++a)
      if (rem_src[a] > 0) { reached[a] = 1; dist[a] = T::zero(); }

    for (int round = 0; round < nodes; ++round) {
      bool changed = false;
      for (int a = 0; a < ns; ++a) {
        if (!reached[a]) continue;
        for (int b = 0; b < nt; ++b) {
          const S nd = dist[a] + cst[a * nt + b];
          if (!reached[ns + b] || improves(nd, dist[ns + b])) {
            reached[ns + b] = 1;
            dist[ns + b] = nd;
            pred[ns + b] = a;
            changed = true;
          }
        }
      }
      for (int b = 0; b < nt; ++b) {
        if (!reached[ns + b]) continue;
        for (int a = 0; a < ns; ++a) {
          if (flow[static_cast<std::size_t>(a) * nt + b] <= 0) continue;
          const S nd = dist[ns + b] - cst[a * nt + b];
          if (!reached[a] || improves(nd, dist[a])) {
            reached[a] = 1;
            dist[a] = nd;
            pred[a] = ns + b;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }

    int best = -1;
    for (int b = 0; b < nt; ++b) {
      if (rem_snk[b] <= 0 || !reached[ns + b]) continue;
      if (best < 0 || dist[ns + b] < dist[ns + best]) best = b;
    }
    if (best < 0) throw std::logic_error("transport: no augmenting path (unbalanced?)");

    // Backtrack to a live source, then cap the amount by the residuals.
    std::vector<int> path;
    int cur = ns + best;
    while (true) {
      path.push_back(cur);
      if (cur < ns && pred[cur] == -1) break;
      cur = pred[cur];
      if (cur < 0) throw std::logic_error("transport: broken predecessor chain");
      if (path.size() > static_cast<std::size_t>(2 * nodes + 2))
        throw std::logic_error("transport: predecessor cycle");
    }
    const int start_src = path.back();
    Rational amount = rem_src[start_src] < rem_snk[best] ? rem_src[start_src] : rem_snk[best];
    for (std::size_t p = 0; p + 1 < path.size(); ++p) {
      const int to = path[p], from = path[p + 1];
      if (to < ns) {  // backward residual arc sink(from) -> source(to)
        const Rational& f = flow[static_cast<std::size_t>(to) * nt + (from - ns)];
        if (f < amount) amount = f;
      }
    }
    if (amount <= 0) throw std::logic_error("transport: zero augmentation");
    for (std::size_t p = 0; p + 1 < path.size(); ++p) {
      const int to = path[p], from = path[p + 1];
      if (to >= ns) {
        flow[static_cast<std::size_t>(from) * nt + (to - ns)] += amount;
      } else {
        flow[static_cast<std::size_t>(to) * nt + (from - ns)] -= amount;
      }
    }
    rem_src[start_src] -= amount;
    rem_snk[best] -= amount;
  }

  for (int a = 0; a < ns; ++a)
    for (int b = 0; b < nt; ++b) {
      const Rational& f = flow[static_cast<std::size_t>(a) * nt + b];
      if (f > 0) {
        out.cost = out.cost + T::from_rational(f) * cst[a * nt + b];
        out.arcs.emplace_back(sources[a], sinks[b], f);
      }
    }
  return out;
}

template <class S, class CostFn>
S transport_min_cost(std::vector<Rational> supply, const CostFn& cost) {
  return transport_solve<S>(std::move(supply), cost).cost;
}

}  // namespace freelab::detail
