#pragma once

#include "gcs/clocks.hpp"
#include "gcs/topology.hpp"

#include <cstdint>

namespace gcs {

struct RequestMsg {
  NodeId sender = 0;
  double l_v_t1 = 0.0;  // sender logical time at emission
};

struct ReplyMsg {
  NodeId responder = 0;
  double l_w_t2 = 0.0;       // responder logical time at request arrival
  double l_w_t3 = 0.0;       // responder logical time at reply emission
  double l_v_t1_echo = 0.0;  // echoed request timestamp
};

/// The four timestamps of one completed exchange, as seen by the requester.
struct MeasurementRecord {
  NodeId neighbor = 0;
  double l_v_t1 = 0.0;
  double l_w_t2 = 0.0;
  double l_w_t3 = 0.0;
  double l_v_t4 = 0.0;
  double completed_at_real = 0.0;
};

/// Result of the delay/offset computation for one neighbor and one cycle.
struct NeighborEstimate {
  NodeId neighbor = 0;
  double d_avg = 0.0;               // averaged one-way delay, local time
  double offset = 0.0;              // estimated L_w - L_v
  double estimate_deduction = 0.0;  // d_avg * (eps_d + theta - 1) + eps_m
  std::uint64_t valid_cycle = 0;
};

/// Local-time wait before a request is declared lost: (2 d_max + p_max + eps_m) * theta.
double timeout_window(double d_max, double p_max, double eps_m, double theta);

/// Responder side. `responder_clock_now` is the responder's logical value at arrival and
/// `local_processing` the logical time it spends before answering.
ReplyMsg handle_request(const RequestMsg& req, NodeId responder, double responder_clock_now,
                        double local_processing);

/// Same, reading both timestamps off the responder's clock for a request arriving at
/// real time `arrival_real` and answered `processing_real` seconds later.
ReplyMsg handle_request(const RequestMsg& req, NodeId responder, const LogicalClock& clock, double arrival_real,
                        double processing_real);

/// Delay and offset algebra. Throws InternalError if the record implies a negative delay.
NeighborEstimate compute_estimates(const MeasurementRecord& rec, double eps_d, double eps_m, double theta,
                                   std::uint64_t cycle = 0);

/// l_v_now + offset - estimate_deduction. Throws UsageError when `current_cycle`
/// differs from the cycle the estimate was computed in.
double estimate_value(const NeighborEstimate& est, double l_v_now, std::uint64_t current_cycle);
double estimate_value(const NeighborEstimate& est, double l_v_now);

/// Time-varying estimation error 2 * (u + worst_delay * (theta - 1)) for an observed
/// window delay variation u.
double estimation_error(const EdgeParams& e, double observed_u, double theta);

/// Uncertainty of a remote frequency estimate averaged over n measurements of length T:
/// eps_m / (sqrt(n) * T).
double averaged_uncertainty(double eps_m, double T, std::uint64_t n_measurements);

}  // namespace gcs
