#include "gcs/gcs_core.hpp"

#include "gcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gcs {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double level_odd(std::size_t s) { return 2.0 * static_cast<double>(s) - 1.0; }
double level_even(std::size_t s) { return 2.0 * static_cast<double>(s); }

}  // namespace

std::vector<std::string> validate_params(const GcsParams& p, double max_timeout) {
  std::vector<std::string> out;
  if (!(p.theta > 1.0)) {
    out.push_back("theta " + num(p.theta) + " must exceed 1: sigma = mu/(theta-1) is undefined otherwise");
  }
  if (!(p.mu > p.theta - 1.0)) out.push_back("mu " + num(p.mu) + " must exceed theta - 1 so that sigma > 1");
  if (!(p.T >= max_timeout)) out.push_back("T " + num(p.T) + " shorter than timeout window " + num(max_timeout));
  if (!(p.T_stab > 0.0)) out.push_back("T_stab " + num(p.T_stab) + " must be positive");
  if (p.s_max < 1) out.emplace_back("s_max must be at least 1");
  if (p.hysteresis < 0.0) out.push_back("hysteresis " + num(p.hysteresis) + " must be non-negative");
  if (p.p_max < 0.0) out.push_back("p_max " + num(p.p_max) + " must be non-negative");
  return out;
}

double correction_to_drift(double mu, double theta) {
  if (!(theta > 1.0)) throw ParameterError("sigma undefined for theta " + num(theta) + " <= 1");
  return mu / (theta - 1.0);
}

std::size_t default_s_max(double g_bound, double kappa_min, double sigma) {
  if (!(sigma > 1.0)) throw ParameterError("sigma must exceed 1");
  if (!(kappa_min > 0.0)) throw ParameterError("kappa_min must be positive");
  const double levels = std::ceil(std::log(g_bound / kappa_min) / std::log(sigma));
  return static_cast<std::size_t>(std::max(0.0, levels)) + 1;
}

const char* to_string(ModeDecision d) {
  switch (d) {
    case ModeDecision::own_rate: return "own_rate";
    case ModeDecision::fast: return "fast";
    case ModeDecision::default_own_rate: return "default_own_rate";
  }
  return "?";
}

bool slow_trigger(double l_v, std::span<const NeighborView> views, std::size_t s, double hysteresis) {
  bool st1 = false;
  for (const auto& x : views) {
    if (l_v - x.estimate >= level_odd(s) * x.kappa + hysteresis) st1 = true;
    if (x.estimate - l_v > level_odd(s) * x.kappa) return false;  // ST-2
  }
  return st1;
}

bool fast_trigger(double l_v, std::span<const NeighborView> views, std::size_t s, double hysteresis) {
  bool ft1 = false;
  for (const auto& x : views) {
    if (x.estimate - l_v > level_even(s) * x.kappa - x.delta + hysteresis) ft1 = true;
    if (!(l_v - x.estimate < level_even(s) * x.kappa + x.delta)) return false;  // FT-2
  }
  return ft1;
}

ModeDecision evaluate_mode(double l_v, std::span<const NeighborView> views, std::size_t s_max, double hysteresis) {
  for (std::size_t s = 1; s <= s_max; ++s) {
    if (slow_trigger(l_v, views, s, hysteresis)) return ModeDecision::own_rate;
  }
  for (std::size_t s = 1; s <= s_max; ++s) {
    if (fast_trigger(l_v, views, s, hysteresis)) return ModeDecision::fast;
  }
  return ModeDecision::default_own_rate;
}

NodeState make_node(NodeId id, const NetworkGraph& g, LogicalClock clock) {
  NodeState n;
  n.id = id;
  n.origin = clock.value(0.0);
  n.logical = std::move(clock);
  for (const auto& adj : g.neighbors(id)) n.neighbors.push_back(adj.node);
  return n;
}

double boundary_local(const NodeState& node, const GcsParams& p, std::uint64_t k) {
  return node.origin + static_cast<double>(k) * p.cycle_length();
}

double next_boundary_real(const NodeState& node, const GcsParams& p) {
  return node.logical.invert(boundary_local(node, p, node.cycle_index));
}

BoundaryActions cycle_boundary(NodeState& node, double real_time, const GcsParams& p) {
  const double expected = next_boundary_real(node, p);
  if (std::abs(real_time - expected) > 1e-9 * (1.0 + std::abs(expected))) {
    throw InternalError("node " + std::to_string(node.id) + " boundary " + std::to_string(node.cycle_index) +
                        " fired at " + num(real_time) + ", expected " + num(expected));
  }
  node.logical.set_mode(real_time, CorrectionMode::own_rate);
  node.mode = CorrectionMode::own_rate;
  node.phase = Phase::measuring;
  node.views.clear();
  node.pending.clear();
  const std::uint64_t k = node.cycle_index++;

  BoundaryActions out;
  const double l_now = node.logical.value(real_time);
  for (NodeId w : node.neighbors) {
    node.pending[w] = l_now;
    out.requests.push_back({w, RequestMsg{node.id, l_now}});
  }
  out.measure_end_real = node.logical.invert(boundary_local(node, p, k) + p.T);
  return out;
}

std::vector<NeighborView> neighbor_views(const NodeState& node, const NetworkGraph& g, double real_time) {
  const double l_v = node.logical.value(real_time);
  std::vector<NeighborView> out;
  out.reserve(node.neighbors.size());
  for (NodeId w : node.neighbors) {
    auto it = node.views.find(w);
    if (it == node.views.end()) {
      throw InternalError("node " + std::to_string(node.id) + " has no estimate for neighbor " + std::to_string(w));
    }
    const double kappa = g.edge(*g.find_edge(node.id, w)).kappa;
    out.push_back({w, estimate_value(it->second, l_v, node.cycle_index), kappa, kappa});
  }
  return out;
}

bool slow_trigger(const NodeState& node, const NetworkGraph& g, std::size_t s, double real_time, double hysteresis) {
  const auto views = neighbor_views(node, g, real_time);
  return slow_trigger(node.logical.value(real_time), views, s, hysteresis);
}

bool fast_trigger(const NodeState& node, const NetworkGraph& g, std::size_t s, double real_time, double hysteresis) {
  const auto views = neighbor_views(node, g, real_time);
  return fast_trigger(node.logical.value(real_time), views, s, hysteresis);
}

ModeDecision evaluate_mode(const NodeState& node, const NetworkGraph& g, const GcsParams& p, double real_time) {
  const auto views = neighbor_views(node, g, real_time);
  return evaluate_mode(node.logical.value(real_time), views, p.s_max, p.hysteresis);
}

void apply_decision(NodeState& node, ModeDecision d, const GcsParams& p, double real_time) {
  const auto mode = (p.enabled && d == ModeDecision::fast) ? CorrectionMode::fast : CorrectionMode::own_rate;
  node.logical.set_mode(real_time, mode);
  node.mode = mode;
  node.phase = Phase::stabilising;
}

}  // namespace gcs
