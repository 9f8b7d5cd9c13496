#include "gcs/metrics.hpp"

#include "gcs/errors.hpp"
#include "gcs/gcs_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace gcs {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double odd(std::size_t s) { return 2.0 * static_cast<double>(s) - 1.0; }
double even(std::size_t s) { return 2.0 * static_cast<double>(s); }

}  // namespace

double local_skew(const NetworkGraph& g, const Eigen::VectorXd& clocks) {
  double out = 0.0;
  for (const auto& e : g.edges()) {
    out = std::max(out, std::abs(clocks(static_cast<Eigen::Index>(e.u)) - clocks(static_cast<Eigen::Index>(e.v))));
  }
  return out;
}

double global_skew(const Eigen::VectorXd& clocks) {
  return clocks.size() == 0 ? 0.0 : clocks.maxCoeff() - clocks.minCoeff();
}

double potential(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, NodeId v, std::size_t s) {
  const auto vi = static_cast<Eigen::Index>(v);
  return (clocks.transpose() - odd(s) * dist.row(vi)).maxCoeff() - clocks(vi);
}

Eigen::VectorXd node_potentials(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, std::size_t s) {
  const auto n = clocks.size();
  const double k = odd(s);
  Eigen::VectorXd out(n);
  // dist is symmetric, so column v holds dist(v, .) contiguously
  for (Eigen::Index v = 0; v < n; ++v) {
    double m = clocks(v);
    for (Eigen::Index w = 0; w < n; ++w) m = std::max(m, clocks(w) - k * dist(w, v));
    out(v) = m - clocks(v);
  }
  return out;
}

LevelPotential level_potential(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, std::size_t s) {
  const Eigen::VectorXd psi = node_potentials(clocks, dist, s);
  LevelPotential best{psi(0), 0};
  for (Eigen::Index v = 1; v < psi.size(); ++v) {
    if (psi(v) > best.value) best = {psi(v), static_cast<NodeId>(v)};
  }
  return best;
}

NodeId leading_node(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, NodeId v, std::size_t s) {
  const auto vi = static_cast<Eigen::Index>(v);
  NodeId best = v;
  double best_val = clocks(vi);  // w = v term
  for (Eigen::Index w = 0; w < clocks.size(); ++w) {
    const double val = clocks(w) - odd(s) * dist(vi, w);
    if (val > best_val || (val == best_val && static_cast<NodeId>(w) < best)) {
      best_val = val;
      best = static_cast<NodeId>(w);
    }
  }
  return best;
}

bool slow_condition(const NetworkGraph& g, const Eigen::VectorXd& clocks, NodeId v, std::size_t s, double slack) {
  const double lv = clocks(static_cast<Eigen::Index>(v));
  bool sc1 = false;
  for (const auto& adj : g.neighbors(v)) {
    const double kappa = g.edge(adj.edge).kappa;
    const double lx = clocks(static_cast<Eigen::Index>(adj.node));
    if (lv - lx >= odd(s) * kappa - slack) sc1 = true;
    if (lx - lv > odd(s) * kappa + slack) return false;
  }
  return sc1;
}

bool fast_condition(const NetworkGraph& g, const Eigen::VectorXd& clocks, NodeId v, std::size_t s, double slack) {
  const double lv = clocks(static_cast<Eigen::Index>(v));
  bool fc1 = false;
  for (const auto& adj : g.neighbors(v)) {
    const double kappa = g.edge(adj.edge).kappa;
    const double lx = clocks(static_cast<Eigen::Index>(adj.node));
    if (lx - lv >= even(s) * kappa - slack) fc1 = true;
    if (lv - lx > even(s) * kappa + slack) return false;
  }
  return fc1;
}

std::size_t trailing_level(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, NodeId w, std::size_t s_max,
                           double tol) {
  const auto wi = static_cast<Eigen::Index>(w);
  const auto n = clocks.size();
  for (std::size_t s = 1; s <= s_max; ++s) {
    const double k = even(s);
    for (Eigen::Index v = 0; v < n; ++v) {
      double m = -std::numeric_limits<double>::infinity();
      for (Eigen::Index x = 0; x < n; ++x) m = std::max(m, clocks(v) - clocks(x) - k * dist(x, v));
      if (m > tol && clocks(v) - clocks(wi) - k * dist(wi, v) >= m - tol) return s;
    }
  }
  return 0;
}

bool trailing_node(const Eigen::VectorXd& clocks, const Eigen::MatrixXd& dist, NodeId w, std::size_t s_max,
                   double tol) {
  return trailing_level(clocks, dist, w, s_max, tol) != 0;
}

double theorem2_bound(double kappa, double g_bound, double sigma) {
  if (!(sigma > 1.0)) throw ParameterError("theorem2_bound: sigma " + num(sigma) + " <= 1");
  if (!(kappa > 0.0)) throw ParameterError("theorem2_bound: kappa must be positive");
  double level = std::log(g_bound / kappa) / std::log(sigma);
  if (std::abs(level - std::round(level)) < 1e-12) level = std::round(level);
  // G <= kappa would give level 0; the bound never drops below one level.
  return 2.0 * kappa * std::max(1.0, std::ceil(level));
}

double theorem3_bound_from_diameter(double kappa_diameter, double sigma) {
  if (!(sigma > 1.0)) throw ParameterError("theorem3_bound: sigma " + num(sigma) + " <= 1");
  return (1.0 + 1.0 / (sigma - 1.0)) * kappa_diameter;
}

double theorem3_bound(const NetworkGraph& g, double sigma) {
  return theorem3_bound_from_diameter(kappa_diameter(g), sigma);
}

std::vector<std::string> leading_lemma_failures(const NetworkGraph& g, const Eigen::VectorXd& clocks,
                                                const Eigen::MatrixXd& dist, std::size_t s, double tol) {
  std::vector<std::string> out;
  const auto n = clocks.size();
  const double k = odd(s);
  for (Eigen::Index v = 0; v < n; ++v) {
    double m = -std::numeric_limits<double>::infinity();
    for (Eigen::Index w = 0; w < n; ++w) m = std::max(m, clocks(w) - k * dist(w, v));
    if (m - clocks(v) <= tol) continue;
    for (Eigen::Index w = 0; w < n; ++w) {
      if (w == v || clocks(w) - k * dist(w, v) < m - tol) continue;
      if (!slow_condition(g, clocks, static_cast<NodeId>(w), s, tol)) {
        out.push_back("node " + std::to_string(w) + " leads node " + std::to_string(v) + " at level " +
                      std::to_string(s) + " without the slow condition");
      }
    }
  }
  return out;
}

std::vector<std::string> trailing_lemma_failures(const NetworkGraph& g, const Eigen::VectorXd& clocks,
                                                 const Eigen::MatrixXd& dist, std::size_t s, double tol) {
  std::vector<std::string> out;
  const auto n = clocks.size();
  const double k = even(s);
  for (Eigen::Index v = 0; v < n; ++v) {
    double m = -std::numeric_limits<double>::infinity();
    for (Eigen::Index x = 0; x < n; ++x) m = std::max(m, clocks(v) - clocks(x) - k * dist(x, v));
    if (m <= tol) continue;
    for (Eigen::Index w = 0; w < n; ++w) {
      if (clocks(v) - clocks(w) - k * dist(w, v) < m - tol) continue;
      if (!fast_condition(g, clocks, static_cast<NodeId>(w), s, tol)) {
        out.push_back("node " + std::to_string(w) + " trails node " + std::to_string(v) + " at level " +
                      std::to_string(s) + " without the fast condition");
      }
    }
  }
  return out;
}

std::vector<Violation> corollary1_check(std::span<const SkewSample> samples, std::size_t s, double theta,
                                        double tol) {
  std::vector<Violation> out;
  if (s < 1) throw ParameterError("corollary1_check: level must be >= 1");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const auto& a = samples[i - 1];
    const auto& b = samples[i];
    const auto col = static_cast<Eigen::Index>(s - 1);
    if (col >= a.node_psi.cols() || col >= b.node_psi.cols()) {
      throw ParameterError("corollary1_check: samples lack level " + std::to_string(s));
    }
    const double allowance = (theta - 1.0) * (b.t_real - a.t_real);
    for (Eigen::Index w = 0; w < b.node_psi.rows(); ++w) {
      const double growth = b.node_psi(w, col) - a.node_psi(w, col);
      if (growth > allowance + tol) {
        out.push_back({b.t_real, "corollary1",
                       "node " + std::to_string(w) + " level " + std::to_string(s) + ": potential grew " + num(growth) +
                           " over [" + num(a.t_real) + ", " + num(b.t_real) + "], allowed " + num(allowance)});
      }
    }
  }
  return out;
}

BoundReport static_bounds(const NetworkGraph& g, double mu, double theta) {
  BoundReport r;
  r.sigma = correction_to_drift(mu, theta);
  r.kappa_max = g.max_kappa();
  r.kappa_diameter = kappa_diameter(g);
  r.global_bound = theorem3_bound_from_diameter(r.kappa_diameter, r.sigma);
  r.local_bound = theorem2_bound(r.kappa_max, r.global_bound, r.sigma);
  for (const auto& e : g.edges()) r.edge_local_bounds.push_back(theorem2_bound(e.kappa, r.global_bound, r.sigma));
  r.max_observed_edge.assign(g.edge_count(), 0.0);
  return r;
}

}  // namespace gcs
