#include "gcs/topology.hpp"

#include "gcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <utility>

namespace gcs {

namespace {

std::string fmt_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string edge_label(std::size_t i, const Edge& e) {
  return "edge " + std::to_string(i) + " (" + std::to_string(e.u) + "-" + std::to_string(e.v) + ")";
}

Eigen::VectorXd dijkstra(const NetworkGraph& g, NodeId source) {
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.node_count()), inf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist(static_cast<Eigen::Index>(source)) = 0.0;
  open.emplace(0.0, source);
  while (!open.empty()) {
    auto [d, v] = open.top();
    open.pop();
    if (d > dist(static_cast<Eigen::Index>(v))) continue;
    for (const auto& adj : g.neighbors(v)) {
      const double nd = d + g.edge(adj.edge).kappa;
      auto& slot = dist(static_cast<Eigen::Index>(adj.node));
      if (nd < slot) {
        slot = nd;
        open.emplace(nd, adj.node);
      }
    }
  }
  return dist;
}

Eigen::VectorXi bfs(const NetworkGraph& g, NodeId source) {
  Eigen::VectorXi hops = Eigen::VectorXi::Constant(static_cast<Eigen::Index>(g.node_count()), -1);
  std::queue<NodeId> frontier;
  hops(static_cast<Eigen::Index>(source)) = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop();
    for (const auto& adj : g.neighbors(v)) {
      auto& h = hops(static_cast<Eigen::Index>(adj.node));
      if (h < 0) {
        h = hops(static_cast<Eigen::Index>(v)) + 1;
        frontier.push(adj.node);
      }
    }
  }
  return hops;
}

void check_node(const NetworkGraph& g, NodeId v) {
  if (v >= g.node_count()) throw ParameterError("node " + std::to_string(v) + " out of range");
}

}  // namespace

double EdgeParams::worst_delay() const { return std::max(fwd_delay, bwd_delay) + jitter; }

NetworkGraph::NetworkGraph(std::size_t n, double d_max, std::vector<Edge> edges)
    : n_(n), d_max_(d_max), edges_(std::move(edges)), adjacency_(n) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.u >= n_ || e.v >= n_) {
      throw ConfigError(edge_label(i, e) + ": endpoint out of range for " + std::to_string(n_) + " nodes");
    }
    adjacency_[e.u].push_back({e.v, i});
    if (e.u != e.v) adjacency_[e.v].push_back({e.u, i});
  }
  for (auto& list : adjacency_) {
    std::stable_sort(list.begin(), list.end(), [](const Adjacent& a, const Adjacent& b) { return a.node < b.node; });
  }
}

std::optional<std::size_t> NetworkGraph::find_edge(NodeId a, NodeId b) const {
  if (a >= n_) return std::nullopt;
  for (const auto& adj : adjacency_[a]) {
    if (adj.node == b) return adj.edge;
  }
  return std::nullopt;
}

double NetworkGraph::base_delay(NodeId from, NodeId to) const {
  const auto idx = find_edge(from, to);
  if (!idx) throw ParameterError("no edge " + std::to_string(from) + " -> " + std::to_string(to));
  const auto& e = edges_[*idx];
  return e.u == from ? e.params.fwd_delay : e.params.bwd_delay;
}

void NetworkGraph::assign_kappa(double theta) {
  for (auto& e : edges_) e.kappa = edge_kappa(e.params, theta);
}

void NetworkGraph::set_kappa(std::size_t edge, double kappa) { edges_.at(edge).kappa = kappa; }

double NetworkGraph::min_kappa() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : edges_) m = std::min(m, e.kappa);
  return m;
}

double NetworkGraph::max_kappa() const {
  double m = 0.0;
  for (const auto& e : edges_) m = std::max(m, e.kappa);
  return m;
}

std::vector<std::string> validate_graph(const NetworkGraph& g) {
  std::vector<std::string> out;
  if (g.node_count() == 0) {
    out.emplace_back("graph has no nodes");
    return out;
  }
  if (!(g.d_max() > 0.0)) out.push_back("d_max " + fmt_num(g.d_max()) + " must be positive");

  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edge(i);
    const auto& p = e.params;
    const auto label = edge_label(i, e);
    if (e.u == e.v) out.push_back(label + ": self loop");
    if (!seen.insert(std::minmax(e.u, e.v)).second) out.push_back(label + ": duplicate edge");
    if (!(p.fwd_delay > 0.0)) out.push_back(label + ": fwd_delay " + fmt_num(p.fwd_delay) + " must be positive");
    if (!(p.bwd_delay > 0.0)) out.push_back(label + ": bwd_delay " + fmt_num(p.bwd_delay) + " must be positive");
    if (p.jitter < 0.0) out.push_back(label + ": jitter " + fmt_num(p.jitter) + " must be non-negative");
    if (p.eps_d < 0.0) out.push_back(label + ": eps_d " + fmt_num(p.eps_d) + " must be non-negative");
    if (p.eps_m < 0.0) out.push_back(label + ": eps_m " + fmt_num(p.eps_m) + " must be non-negative");
    if (!(p.length > 0.0)) out.push_back(label + ": length " + fmt_num(p.length) + " must be positive");
    if (!(p.fwd_delay + p.jitter < g.d_max())) {
      out.push_back(label + ": fwd_delay + jitter " + fmt_num(p.fwd_delay + p.jitter) + " >= d_max " + fmt_num(g.d_max()));
    }
    if (!(p.bwd_delay + p.jitter < g.d_max())) {
      out.push_back(label + ": bwd_delay + jitter " + fmt_num(p.bwd_delay + p.jitter) + " >= d_max " + fmt_num(g.d_max()));
    }
    const double asym = std::abs(p.fwd_delay - p.bwd_delay) + p.jitter;
    const double allowed = std::max(p.fwd_delay, p.bwd_delay) * p.eps_d;
    if (asym > allowed) out.push_back(label + ": asymmetry " + fmt_num(asym) + " > " + fmt_num(allowed));
  }

  const auto hops = bfs(g, 0);
  if ((hops.array() < 0).any()) out.emplace_back("graph not connected");
  return out;
}

std::size_t hop_distance(const NetworkGraph& g, NodeId v, NodeId w) {
  check_node(g, v);
  check_node(g, w);
  const int h = bfs(g, v)(static_cast<Eigen::Index>(w));
  if (h < 0) throw ParameterError("node " + std::to_string(w) + " unreachable from " + std::to_string(v));
  return static_cast<std::size_t>(h);
}

Eigen::MatrixXi hop_distances(const NetworkGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXi out(n, n);
  for (Eigen::Index v = 0; v < n; ++v) out.row(v) = bfs(g, static_cast<NodeId>(v)).transpose();
  return out;
}

std::size_t hop_diameter(const NetworkGraph& g) {
  const auto all = hop_distances(g);
  if ((all.array() < 0).any()) throw ParameterError("hop diameter of a disconnected graph");
  return all.size() == 0 ? 0 : static_cast<std::size_t>(all.maxCoeff());
}

double edge_kappa(const EdgeParams& e, double theta) {
  if (!(theta >= 1.0)) throw ParameterError("theta " + fmt_num(theta) + " < 1");
  return 2.0 * (e.worst_delay() * (theta - 1.0 + e.eps_d) + e.eps_m);
}

double weighted_distance(const NetworkGraph& g, NodeId v, NodeId w, double multiplier) {
  check_node(g, v);
  check_node(g, w);
  if (v == w) return 0.0;
  return multiplier * dijkstra(g, v)(static_cast<Eigen::Index>(w));
}

Eigen::MatrixXd kappa_distances(const NetworkGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index v = 0; v < n; ++v) out.row(v) = dijkstra(g, static_cast<NodeId>(v)).transpose();
  // Dijkstra rounding can differ by an ulp between the two directions.
  out = 0.5 * (out + out.transpose()).eval();
  return out;
}

double kappa_diameter(const NetworkGraph& g) {
  const auto d = kappa_distances(g);
  return d.size() == 0 ? 0.0 : d.maxCoeff();
}

std::vector<NodeId> shortest_kappa_path(const NetworkGraph& g, NodeId v, NodeId w) {
  check_node(g, v);
  check_node(g, w);
  const Eigen::VectorXd to_w = dijkstra(g, w);
  if (!std::isfinite(to_w(static_cast<Eigen::Index>(v)))) {
    throw ParameterError("node " + std::to_string(w) + " unreachable from " + std::to_string(v));
  }
  std::vector<NodeId> path{v};
  NodeId cur = v;
  while (cur != w) {
    const double here = to_w(static_cast<Eigen::Index>(cur));
    const double tol = 1e-12 * (1.0 + here);
    bool advanced = false;
    // Neighbors are sorted by id, so the first tight hop gives the lexicographic minimum.
    for (const auto& adj : g.neighbors(cur)) {
      const double via = g.edge(adj.edge).kappa + to_w(static_cast<Eigen::Index>(adj.node));
      if (std::abs(via - here) <= tol && to_w(static_cast<Eigen::Index>(adj.node)) < here + tol &&
          std::find(path.begin(), path.end(), adj.node) == path.end()) {
        cur = adj.node;
        path.push_back(cur);
        advanced = true;
        break;
      }
    }
    if (!advanced) throw InternalError("shortest path reconstruction stalled");
  }
  return path;
}

}  // namespace gcs
