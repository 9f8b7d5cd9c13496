#include "gcs/twoway.hpp"

#include "gcs/errors.hpp"

#include <cmath>
#include <string>

namespace gcs {

double timeout_window(double d_max, double p_max, double eps_m, double theta) {
  if (d_max < 0.0 || p_max < 0.0 || eps_m < 0.0) throw ParameterError("timeout_window: negative argument");
  if (!(theta >= 1.0)) throw ParameterError("timeout_window: theta < 1");
  return (2.0 * d_max + p_max + eps_m) * theta;
}

ReplyMsg handle_request(const RequestMsg& req, NodeId responder, double responder_clock_now,
                        double local_processing) {
  if (local_processing < 0.0) throw ParameterError("negative processing delay");
  return ReplyMsg{responder, responder_clock_now, responder_clock_now + local_processing, req.l_v_t1};
}

ReplyMsg handle_request(const RequestMsg& req, NodeId responder, const LogicalClock& clock, double arrival_real,
                        double processing_real) {
  if (processing_real < 0.0) throw ParameterError("negative processing delay");
  return ReplyMsg{responder, clock.value(arrival_real), clock.value(arrival_real + processing_real), req.l_v_t1};
}

NeighborEstimate compute_estimates(const MeasurementRecord& rec, double eps_d, double eps_m, double theta,
                                   std::uint64_t cycle) {
  const double t_v = rec.l_v_t4 - rec.l_v_t1;
  const double t_w = rec.l_w_t3 - rec.l_w_t2;
  double d_avg = 0.5 * (t_v - t_w);
  if (d_avg < 0.0 && d_avg > -1e-12 * (1.0 + std::abs(rec.l_v_t4))) d_avg = 0.0;
  if (d_avg < 0.0) {
    throw InternalError("negative average delay for neighbor " + std::to_string(rec.neighbor) +
                        ": t_v=" + std::to_string(t_v) + " t_w=" + std::to_string(t_w));
  }
  // Request offset (t2 - t1) and answer offset (t3 - t4) averaged; the delays cancel.
  const double offset = 0.5 * ((rec.l_w_t2 - rec.l_v_t1) + (rec.l_w_t3 - rec.l_v_t4));
  return NeighborEstimate{rec.neighbor, d_avg, offset, d_avg * (eps_d + theta - 1.0) + eps_m, cycle};
}

double estimate_value(const NeighborEstimate& est, double l_v_now, std::uint64_t current_cycle) {
  if (current_cycle != est.valid_cycle) {
    throw UsageError("estimate for neighbor " + std::to_string(est.neighbor) + " is from cycle " +
                     std::to_string(est.valid_cycle) + ", now in cycle " + std::to_string(current_cycle));
  }
  return estimate_value(est, l_v_now);
}

double estimate_value(const NeighborEstimate& est, double l_v_now) {
  return l_v_now + est.offset - est.estimate_deduction;
}

double estimation_error(const EdgeParams& e, double observed_u, double theta) {
  if (observed_u < 0.0) throw ParameterError("negative delay variation");
  if (!(theta >= 1.0)) throw ParameterError("theta < 1");
  return 2.0 * (observed_u + e.worst_delay() * (theta - 1.0));
}

double averaged_uncertainty(double eps_m, double T, std::uint64_t n_measurements) {
  if (!(T > 0.0)) throw ParameterError("measurement interval T must be positive");
  if (n_measurements == 0) throw ParameterError("need at least one measurement");
  return eps_m / (std::sqrt(static_cast<double>(n_measurements)) * T);
}

}  // namespace gcs
