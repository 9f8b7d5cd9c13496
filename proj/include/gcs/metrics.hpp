#pragma once

#include "gcs/topology.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gcs {

/// Max over edges of |L_u - L_v|.
double local_skew(const NetworkGraph& g, const Eigen::VectorXd& clocks);

/// max L - min L.
double global_skew(const Eigen::VectorXd& clocks);

/// Psi_v^s = max_w { L_w - L_v - (2s - 1) dist(v, w) }; the w = v term makes it >= 0.
double potential(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, NodeId v, std::size_t s);

/// Psi_v^s for every v at once. `dist` must be symmetric.
Eigen::VectorXd node_potentials(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, std::size_t s);

struct LevelPotential {
  double value;
  NodeId node;  // argmax v of Psi_v^s, lowest id on ties
};

/// Psi^s = max_v Psi_v^s.
LevelPotential level_potential(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, std::size_t s);

/// The node w realising Psi_v^s (lowest id on ties); v itself when nothing is ahead.
NodeId leading_node(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, NodeId v, std::size_t s);

/// SC-1 and SC-2 on true clock values. `slack` loosens every clause, for oracle use.
bool slow_condition(const NetworkGraph& g, const Eigen::VectorXd& clocks, NodeId v, std::size_t s,
                    double slack = 0.0);
/// FC-1 and FC-2 on true clock values.
bool fast_condition(const NetworkGraph& g, const Eigen::VectorXd& clocks, NodeId v, std::size_t s,
                    double slack = 0.0);

/// Level at which w is trailing (some v with w maximising L_v - L_x - 2s dist(v, x) > 0),
/// searched over [1, s_max]; 0 when w is not trailing.
std::size_t trailing_level(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, NodeId w, std::size_t s_max,
                           double tol = 0.0);
bool trailing_node(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, NodeId w, std::size_t s_max,
                   double tol = 0.0);

/// 2 kappa ceil(log_sigma(g_bound / kappa)), with the level clamped to at least 1.
double theorem2_bound(double kappa, double g_bound, double sigma);

/// (1 + 1/(sigma - 1)) times the kappa-weighted diameter.
double theorem3_bound(const NetworkGraph& g, double sigma);
double theorem3_bound_from_diameter(double kappa_diameter, double sigma);

/// Leading nodes (maximisers with positive potential) that fail the slow condition.
std::vector<std::string> leading_lemma_failures(const NetworkGraph& g, const Eigen::VectorXd& clocks,
                                                const Eigen::MatrixXd& dist, std::size_t s, double tol = 1e-9);
/// Trailing nodes at level s that fail the fast condition.
std::vector<std::string> trailing_lemma_failures(const NetworkGraph& g, const Eigen::VectorXd& clocks,
                                                 const Eigen::MatrixXd& dist, std::size_t s, double tol = 1e-9);

struct SkewSample {
  double t_real = 0.0;
  Eigen::VectorXd logical;       // L_v
  Eigen::VectorXd hardware;      // H_v
  std::vector<std::uint8_t> mode;  // 0 own rate, 1 fast
  double local_skew = 0.0;
  double global_skew = 0.0;
  Eigen::VectorXd psi;           // Psi^s for s = 1..s_max (index s - 1)
  Eigen::MatrixXd node_psi;      // Psi_v^s, n x s_max
  NodeId leading_node = 0;       // node ahead realising Psi^1
  Eigen::VectorXd edge_offsets;  // L_v - L_u per edge
};

struct Violation {
  double time;
  std::string kind;
  std::string detail;
};

/// Psi_w^s(t1) <= Psi_w^s(t0) + (theta - 1)(t1 - t0) over consecutive samples, which by
/// transitivity covers every sampled pair. Empty iff it holds within `tol`.
std::vector<Violation> corollary1_check(std::span<const SkewSample> samples, std::size_t s, double theta,
                                        double tol = 1e-9);

struct BoundReport {
  double sigma = 0.0;
  double kappa_max = 0.0;
  double kappa_diameter = 0.0;
  double local_bound = 0.0;  // uniform bound using the largest kappa
  double global_bound = 0.0;
  std::vector<double> edge_local_bounds;
  double max_observed_local = 0.0;
  double max_observed_global = 0.0;
  std::vector<double> max_observed_edge;  // max |L_u - L_v| per edge
  bool local_satisfied = true;
  bool global_satisfied = true;
  bool edge_local_satisfied = true;
};

/// Static part of the report (sigma and bounds) for a graph with assigned kappa.
BoundReport static_bounds(const NetworkGraph& g, double mu, double theta);

}  // namespace gcs
