#pragma once

#include "gcs/clocks.hpp"
#include "gcs/gcs_core.hpp"
#include "gcs/metrics.hpp"
#include "gcs/random.hpp"
#include "gcs/topology.hpp"
#include "gcs/twoway.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace gcs {

/// Hardware clock of one node: initial value plus a rate generator.
struct ClockSpec {
  double initial = 0.0;  // H_v(0)
  GeneratorKind kind = GeneratorKind::constant;
  double rate = 1.0;          // constant
  double period = 0.0;        // alternating
  bool start_high = true;     // alternating
  double dwell = 0.0;         // random_walk
  double step = 0.0;          // random_walk
  double start_rate = 1.0;    // random_walk
  std::optional<std::uint64_t> walk_seed;  // random_walk; master seed when absent
  std::vector<RateSegment> script;         // script
};

/// Per-message delays replayed in order (and cyclically) instead of sampling.
struct DelayScript {
  std::vector<double> fwd;  // u -> v of the edge
  std::vector<double> bwd;  // v -> u
};

struct Scenario {
  NetworkGraph graph;
  std::vector<ClockSpec> clocks;
  GcsParams params;
  std::optional<std::size_t> s_max;  // default_s_max() when absent
  std::optional<std::uint64_t> horizon_cycles;
  std::optional<double> horizon_seconds;
  std::uint64_t seed = 0;
  double sample_dt = 0.0;  // grid spacing for SampleTick, 0 disables the grid
  std::map<std::size_t, DelayScript> delay_scripts;  // by edge index
  bool prepared = false;
};

/// Assigns kappa to every edge and fills params.s_max. Idempotent.
void prepare_scenario(Scenario& sc);

/// Real-time upper bound on the run length (used to size clock schedules).
double horizon_real_bound(const Scenario& sc);

/// H_v(0) - H_w(0) <= kappa distance for every pair; one message per offending pair.
std::vector<std::string> initial_sync_violations(const Scenario& sc);

/// All blocking problems of a prepared scenario; empty iff it can run.
std::vector<std::string> validate_scenario(const Scenario& sc);

/// Parameter choices the model tolerates but under which the estimate bounds may fail.
std::vector<std::string> scenario_warnings(const Scenario& sc);

/// Hardware clocks for every node, drawing "clock/<v>" streams from `streams`.
std::vector<HardwareClock> build_clocks(const Scenario& sc, StreamRegistry& streams);

/// Per-direction delay source over one graph.
class DelaySampler {
 public:
  DelaySampler(const NetworkGraph& g, StreamRegistry& streams, const std::map<std::size_t, DelayScript>& scripts = {});

  /// Next delay for from -> to. Throws InternalError when there is no such edge.
  double sample(NodeId from, NodeId to);
  /// base + jitter for from -> to.
  [[nodiscard]] double upper(NodeId from, NodeId to) const;
  [[nodiscard]] double lower(NodeId from, NodeId to) const;

 private:
  struct Direction {
    double base = 0.0;
    double jitter = 0.0;
    std::mt19937_64 rng;
    std::vector<double> script;
    std::size_t next = 0;
  };
  Direction& direction(NodeId from, NodeId to);
  [[nodiscard]] const Direction& direction(NodeId from, NodeId to) const;

  std::map<std::pair<NodeId, NodeId>, Direction> dirs_;
};

enum class EventKind : std::uint8_t {
  cycle_boundary,
  measure_end,
  request_arrival,
  reply_emission,
  reply_arrival,
  rate_breakpoint,
  sample_tick,
};

const char* to_string(EventKind k);

/// Message contents plus the ground truth carried along for the oracle.
struct Payload {
  double l_v_t1 = 0.0;
  double l_w_t2 = 0.0;
  double l_w_t3 = 0.0;
  double sent_real = 0.0;  // request emission
  double fwd_delay = 0.0;
  double processing = 0.0;
  double bwd_delay = 0.0;
};

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::sample_tick;
  NodeId node = 0;  // the node handling the event
  NodeId peer = 0;  // sender for arrivals
  Payload payload;
};

/// Min-ordering on (time, seq).
struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    return a.time != b.time ? a.time > b.time : a.seq > b.seq;
  }
};

class EventQueue {
 public:
  /// Assigns the next seq and enqueues.
  void push(Event e);
  Event pop();
  [[nodiscard]] const Event& top() const { return q_.top(); }
  [[nodiscard]] bool empty() const { return q_.empty(); }
  [[nodiscard]] std::size_t size() const { return q_.size(); }
  [[nodiscard]] std::uint64_t next_seq() const { return seq_; }

 private:
  std::priority_queue<Event, std::vector<Event>, EventAfter> q_;
  std::uint64_t seq_ = 0;
};

enum class MessageKind : std::uint8_t { request, reply };

/// Arrival event for a message sent from -> to at `send_real_time`, delayed by one
/// draw from the sampler. Throws InternalError when the edge does not exist.
Event deliver(DelaySampler& sampler, MessageKind kind, Payload payload, NodeId from, NodeId to,
              double send_real_time);

struct RunOptions {
  bool record_samples = true;
  bool record_measurements = false;
  bool record_decisions = false;
  bool monitors = true;                 // ground-truth oracles
  std::size_t max_violations_per_kind = 100;  // further ones are only counted
};

struct MeasurementLog {
  NodeId v = 0;
  NodeId w = 0;
  std::uint64_t cycle = 0;
  MeasurementRecord record;
  NeighborEstimate estimate;
  double t1_real = 0.0;
  double t4_real = 0.0;
  double fwd_delay = 0.0;
  double bwd_delay = 0.0;
  double processing = 0.0;
  double true_offset_mid = 0.0;  // L_w - L_v at (t1 + t4) / 2
};

struct DecisionLog {
  double t_real = 0.0;
  NodeId node = 0;
  std::uint64_t cycle = 0;
  ModeDecision decision = ModeDecision::default_own_rate;
  std::vector<std::uint8_t> slow;  // ST per level
  std::vector<std::uint8_t> fast;  // FT per level
};

struct RunStats {
  std::uint64_t events = 0;
  std::uint64_t samples = 0;
  std::uint64_t measurements = 0;
  std::uint64_t evaluations = 0;    // node-level trigger evaluations
  std::uint64_t level_checks = 0;   // (evaluation, level) pairs
  std::uint64_t estimate_uses = 0;
  std::uint64_t fast_decisions = 0;
  double max_estimate_excess = -1e300;  // max of estimate - truth
  double max_estimate_shortfall = 0.0;  // max of truth - estimate
};

struct Trace {
  std::size_t n = 0;
  std::size_t s_max = 0;
  BoundReport bounds;
  std::vector<SkewSample> samples;
  std::vector<MeasurementLog> measurements;
  std::vector<DecisionLog> decisions;
  std::vector<Violation> violations;
  std::map<std::string, std::uint64_t> violation_counts;
  bool aborted = false;
  std::uint64_t cycles_completed = 0;  // of the slowest node
  double end_time = 0.0;
  Eigen::VectorXd psi_at_zero;  // Psi^s(0), index s - 1
  bool initial_within_kappa = false;
  std::optional<double> first_global_exceed;  // first sample with G > global bound
  RunStats stats;

  [[nodiscard]] std::uint64_t violation_total() const;
};

/// Runs a prepared, valid scenario. Throws ConfigError when validation fails.
Trace run(const Scenario& sc, const RunOptions& opt = {});

/// Corollary 1 over the recorded samples of a trace.
std::vector<Violation> corollary1_check(const Trace& trace, std::size_t s, double theta, double tol = 1e-9);

}  // namespace gcs
