#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace gcs {

/// Dense node index in [0, n).
using NodeId = std::size_t;

/// Per-edge link parameters. "Forward" is the u -> v direction of the owning Edge.
struct EdgeParams {
  double fwd_delay = 1.0;  // base delay u -> v, seconds
  double bwd_delay = 1.0;  // base delay v -> u, seconds
  double jitter = 0.0;     // additive jitter width, sampled delay in [base, base + jitter]
  double eps_d = 0.0;      // asymmetry bound, fraction of the worst direction delay
  double eps_m = 0.0;      // measurement uncertainty bound, seconds
  double length = 1.0;     // descriptive edge length

  /// Upper bound on any sampled delay in either direction.
  [[nodiscard]] double worst_delay() const;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  EdgeParams params;
  double kappa = 0.0;  // static estimation-error weight, see edge_kappa()
};

/// Neighbor entry of the adjacency list.
struct Adjacent {
  NodeId node;
  std::size_t edge;
};

/// Undirected communication graph, every edge usable in both directions.
/// Immutable apart from the kappa weights, which are assigned once after construction.
class NetworkGraph {
 public:
  NetworkGraph() = default;
  /// Throws ConfigError when an endpoint is out of range; all other invariants are
  /// reported by validate_graph().
  NetworkGraph(std::size_t n, double d_max, std::vector<Edge> edges);

  [[nodiscard]] std::size_t node_count() const { return n_; }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  [[nodiscard]] double d_max() const { return d_max_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const Edge& edge(std::size_t i) const { return edges_.at(i); }

  /// Neighbors of v in ascending node id.
  [[nodiscard]] const std::vector<Adjacent>& neighbors(NodeId v) const { return adjacency_.at(v); }
  [[nodiscard]] std::optional<std::size_t> find_edge(NodeId a, NodeId b) const;

  /// Base delay for the directed hop from -> to.
  [[nodiscard]] double base_delay(NodeId from, NodeId to) const;

  /// Sets every edge's kappa to edge_kappa(params, theta).
  void assign_kappa(double theta);
  void set_kappa(std::size_t edge, double kappa);
  [[nodiscard]] double min_kappa() const;
  [[nodiscard]] double max_kappa() const;

 private:
  std::size_t n_ = 0;
  double d_max_ = 0.0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Adjacent>> adjacency_;
};

/// Empty iff the graph is connected and every edge satisfies the delay,
/// asymmetry and sign constraints. Each message names the offending edge.
std::vector<std::string> validate_graph(const NetworkGraph& g);

/// Edge count of a shortest unweighted path. Throws ParameterError if unreachable.
std::size_t hop_distance(const NetworkGraph& g, NodeId v, NodeId w);

/// All-pairs hop distances by BFS; -1 marks unreachable pairs.
Eigen::MatrixXi hop_distances(const NetworkGraph& g);

/// Maximum hop distance over all pairs.
std::size_t hop_diameter(const NetworkGraph& g);

/// kappa_e = 2 * (worst_delay * (theta - 1 + eps_d) + eps_m).
double edge_kappa(const EdgeParams& e, double theta);

/// multiplier * (minimum kappa path sum from v to w).
double weighted_distance(const NetworkGraph& g, NodeId v, NodeId w, double multiplier = 1.0);

/// All-pairs kappa-weighted shortest path sums (multiplier 1).
Eigen::MatrixXd kappa_distances(const NetworkGraph& g);

/// Largest entry of kappa_distances().
double kappa_diameter(const NetworkGraph& g);

/// A minimum-kappa path from v to w, ties broken by the lexicographically smallest
/// node sequence.
std::vector<NodeId> shortest_kappa_path(const NetworkGraph& g, NodeId v, NodeId w);

}  // namespace gcs
