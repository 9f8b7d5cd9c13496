#pragma once

#include "gcs/clocks.hpp"
#include "gcs/topology.hpp"
#include "gcs/twoway.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gcs {

struct GcsParams {
  double theta = 1.001;
  double mu = 0.01;
  double T = 30.0;       // measuring window, local time
  double T_stab = 70.0;  // stabilising window, local time
  std::size_t s_max = 1;
  double hysteresis = 0.0;
  double p_max = 0.0;    // responder processing bound, real time
  bool enabled = true;   // false forces own_rate after every evaluation
  CorrectionSemantics semantics = CorrectionSemantics::multiplicative;

  [[nodiscard]] double cycle_length() const { return T + T_stab; }
};

/// Violations of the parameter invariants; `max_timeout` is the largest timeout window
/// over all edges. Empty iff usable.
std::vector<std::string> validate_params(const GcsParams& p, double max_timeout);

/// sigma = mu / (theta - 1). Throws ParameterError when theta <= 1.
double correction_to_drift(double mu, double theta);

/// Smallest level cap covering the skew hierarchy: ceil(log_sigma(g_bound / kappa_min)) + 1.
std::size_t default_s_max(double g_bound, double kappa_min, double sigma);

enum class Phase : std::uint8_t { measuring, stabilising };
enum class ModeDecision : std::uint8_t { own_rate, fast, default_own_rate };

const char* to_string(ModeDecision d);

/// What a node knows about one neighbor at an evaluation instant.
struct NeighborView {
  NodeId neighbor;
  double estimate;  // estimated neighbor logical clock
  double kappa;     // edge weight
  double delta;     // estimation error bound used by the fast trigger
};

/// ST-1 and ST-2 at level s.
bool slow_trigger(double l_v, std::span<const NeighborView> views, std::size_t s, double hysteresis = 0.0);
/// FT-1 and FT-2 at level s (strict inequalities).
bool fast_trigger(double l_v, std::span<const NeighborView> views, std::size_t s, double hysteresis = 0.0);
/// own_rate if ST holds at some level in [1, s_max], else fast if FT does, else default_own_rate.
ModeDecision evaluate_mode(double l_v, std::span<const NeighborView> views, std::size_t s_max,
                           double hysteresis = 0.0);

/// Per-node state of the cycle loop.
struct NodeState {
  NodeId id = 0;
  LogicalClock logical;
  std::vector<NodeId> neighbors;  // ascending
  double origin = 0.0;            // L_v(0); boundaries sit at origin + k (T + T_stab)
  Phase phase = Phase::stabilising;
  std::uint64_t cycle_index = 0;  // boundaries fired so far
  std::map<NodeId, double> pending;  // neighbor -> l_v_t1 of the outstanding request
  std::map<NodeId, NeighborEstimate> views;
  CorrectionMode mode = CorrectionMode::own_rate;
};

NodeState make_node(NodeId id, const NetworkGraph& g, LogicalClock clock);

/// Logical value at which boundary k fires.
double boundary_local(const NodeState& node, const GcsParams& p, std::uint64_t k);
/// Real time of the next boundary (index cycle_index) under the clock's current mode.
double next_boundary_real(const NodeState& node, const GcsParams& p);

struct OutgoingRequest {
  NodeId to;
  RequestMsg msg;
};

struct BoundaryActions {
  std::vector<OutgoingRequest> requests;  // one per neighbor, ascending id
  double measure_end_real;                // when the triggers are evaluated
};

/// Fires the cycle boundary: stops correcting, clears views, emits one request per
/// neighbor and enters the measuring phase. Throws InternalError when `real_time` is not
/// the expected boundary instant.
BoundaryActions cycle_boundary(NodeState& node, double real_time, const GcsParams& p);

/// Neighbor views at `real_time` from the current cycle's estimates; kappa and delta
/// both come from the static edge weight. Throws InternalError on a missing view.
std::vector<NeighborView> neighbor_views(const NodeState& node, const NetworkGraph& g, double real_time);

bool slow_trigger(const NodeState& node, const NetworkGraph& g, std::size_t s, double real_time,
                  double hysteresis = 0.0);
bool fast_trigger(const NodeState& node, const NetworkGraph& g, std::size_t s, double real_time,
                  double hysteresis = 0.0);
ModeDecision evaluate_mode(const NodeState& node, const NetworkGraph& g, const GcsParams& p, double real_time);

/// Applies a decision at the end of the measuring phase: sets the correction for the
/// stabilising phase (own_rate when GCS is disabled) and switches phase.
void apply_decision(NodeState& node, ModeDecision d, const GcsParams& p, double real_time);

}  // namespace gcs
