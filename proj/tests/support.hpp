#pragma once

// Shared builders and brute-force oracles for the test suites.

#include "gcs/engine.hpp"
#include "gcs/scenario.hpp"
#include "gcs/topology.hpp"

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <vector>

namespace testing {

using gcs::Edge;
using gcs::EdgeParams;
using gcs::NetworkGraph;
using gcs::NodeId;

inline EdgeParams unit_edge() { return EdgeParams{1.0, 1.0, 0.0, 0.0, 0.0, 1.0}; }

/// Graph with explicitly set kappa weights.
inline NetworkGraph weighted(std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& es) {
  std::vector<Edge> edges;
  for (auto [u, v, k] : es) edges.push_back({u, v, unit_edge(), k});
  return NetworkGraph(n, 10.0, std::move(edges));
}

/// Connected random graph with random kappa in [lo, hi).
inline NetworkGraph random_weighted(std::size_t n, double p, std::mt19937_64& rng, double lo = 0.1, double hi = 1.0) {
  std::uniform_real_distribution<double> k(lo, hi);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::tuple<NodeId, NodeId, double>> es;
  for (std::size_t i = 1; i < n; ++i) es.emplace_back(std::uniform_int_distribution<std::size_t>(0, i - 1)(rng), i, k(rng));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool have = false;
      for (auto& [a, b, w] : es) have = have || (std::min(a, b) == i && std::max(a, b) == j);
      if (!have && coin(rng) < p) es.emplace_back(i, j, k(rng));
    }
  }
  return weighted(n, es);
}

/// Minimum kappa sum over every simple path, by exhaustive DFS.
inline double min_path_exhaustive(const NetworkGraph& g, NodeId v, NodeId w) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> seen(g.node_count(), false);
  std::function<void(NodeId, double)> go = [&](NodeId x, double acc) {
    if (x == w) {
      best = std::min(best, acc);
      return;
    }
    seen[x] = true;
    for (const auto& adj : g.neighbors(x)) {
      if (!seen[adj.node]) go(adj.node, acc + g.edge(adj.edge).kappa);
    }
    seen[x] = false;
  };
  go(v, 0.0);
  return best;
}

inline Eigen::MatrixXd floyd_warshall(const NetworkGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = 0.0;
  for (const auto& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    d(u, v) = std::min(d(u, v), e.kappa);
    d(v, u) = std::min(d(v, u), e.kappa);
  }
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
  return d;
}

inline std::vector<int> bfs_hops(const NetworkGraph& g, NodeId s) {
  std::vector<int> h(g.node_count(), -1);
  std::queue<NodeId> q;
  h[s] = 0;
  q.push(s);
  while (!q.empty()) {
    auto x = q.front();
    q.pop();
    for (const auto& adj : g.neighbors(x)) {
      if (h[adj.node] < 0) {
        h[adj.node] = h[x] + 1;
        q.push(adj.node);
      }
    }
  }
  return h;
}

/// Edge parameters with kappa = 1 at theta = 1.001: delays 10, jitter 0.2, eps_d 0.02.
inline EdgeParams kappa_one_edge() { return EdgeParams{10.0, 10.0, 0.2, 0.02, 0.2858, 1.0}; }

/// Antiphase constant-drift scenario over `g` with the standard cycle parameters.
inline gcs::Scenario antiphase(NetworkGraph g, std::uint64_t cycles, std::uint64_t seed = 7) {
  gcs::Scenario sc;
  const auto hops = bfs_hops(g, 0);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    gcs::ClockSpec c;
    c.kind = gcs::GeneratorKind::alternating;
    c.period = 1e7;
    c.start_high = hops[v] % 2 == 0;
    sc.clocks.push_back(c);
  }
  sc.graph = std::move(g);
  sc.params.theta = 1.001;
  sc.params.mu = 0.01;
  sc.params.T = 30.0;
  sc.params.T_stab = 70.0;
  sc.params.p_max = 1.0;
  sc.horizon_cycles = cycles;
  sc.seed = seed;
  gcs::prepare_scenario(sc);
  return sc;
}

}  // namespace testing
