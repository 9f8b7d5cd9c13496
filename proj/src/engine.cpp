#include "gcs/engine.hpp"

#include "gcs/errors.hpp"

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

constexpr double kTol = 1e-9;

std::string dir_label(const char* what, NodeId from, NodeId to) {
  return std::string(what) + "/" + std::to_string(from) + "->" + std::to_string(to);
}

}  // namespace

void prepare_scenario(Scenario& sc) {
  const auto& p = sc.params;
  sc.graph.assign_kappa(p.theta);
  if (sc.s_max) {
    sc.params.s_max = *sc.s_max;
  } else if (p.theta > 1.0 && p.mu > p.theta - 1.0 && sc.graph.node_count() > 0 && sc.graph.min_kappa() > 0.0) {
    const double sigma = correction_to_drift(p.mu, p.theta);
    sc.params.s_max = default_s_max(theorem3_bound(sc.graph, sigma), sc.graph.min_kappa(), sigma);
  }
  sc.prepared = true;
}

double horizon_real_bound(const Scenario& sc) {
  if (sc.horizon_seconds) return *sc.horizon_seconds;
  // Local time never runs slower than real time, so boundary k fires by k cycle lengths.
  const double cycles = sc.horizon_cycles ? static_cast<double>(*sc.horizon_cycles) : 0.0;
  return (cycles + 2.0) * sc.params.cycle_length();
}

std::vector<std::string> initial_sync_violations(const Scenario& sc) {
  std::vector<std::string> out;
  const auto n = sc.graph.node_count();
  if (sc.clocks.size() != n || n == 0) return out;
  const Eigen::MatrixXd dist = kappa_distances(sc.graph);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = v + 1; w < n; ++w) {
      const double gap = std::abs(sc.clocks[v].initial - sc.clocks[w].initial);
      const double allowed = dist(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w));
      if (gap > allowed) {
        out.push_back("initial synchronisation violated: |H_" + std::to_string(v) + "(0) - H_" + std::to_string(w) +
                      "(0)| = " + num(gap) + " > kappa distance " + num(allowed));
      }
    }
  }
  return out;
}

std::vector<std::string> validate_scenario(const Scenario& sc) {
  std::vector<std::string> out;
  if (!sc.prepared) {
    out.emplace_back("scenario not prepared");
    return out;
  }
  const auto& g = sc.graph;
  const auto& p = sc.params;
  for (auto& m : validate_graph(g)) out.push_back(std::move(m));

  double max_timeout = 0.0;
  for (const auto& e : g.edges()) {
    if (e.params.eps_m >= 0.0 && g.d_max() >= 0.0 && p.p_max >= 0.0 && p.theta >= 1.0) {
      max_timeout = std::max(max_timeout, timeout_window(g.d_max(), p.p_max, e.params.eps_m, p.theta));
    }
  }
  for (auto& m : validate_params(p, max_timeout)) out.push_back(std::move(m));

  if (sc.clocks.size() != g.node_count()) {
    out.push_back("clock configs for " + std::to_string(sc.clocks.size()) + " nodes, graph has " +
                  std::to_string(g.node_count()));
  } else {
    for (std::size_t v = 0; v < sc.clocks.size(); ++v) {
      const auto& c = sc.clocks[v];
      const std::string who = "clock " + std::to_string(v) + ": ";
      switch (c.kind) {
        case GeneratorKind::constant:
          if (!(c.rate >= 1.0 && c.rate <= p.theta)) out.push_back(who + "rate " + num(c.rate) + " outside [1, theta]");
          break;
        case GeneratorKind::alternating:
          if (!(c.period > 0.0)) out.push_back(who + "alternating period must be positive");
          break;
        case GeneratorKind::random_walk:
          if (!(c.dwell > 0.0)) out.push_back(who + "random walk dwell must be positive");
          if (c.step < 0.0) out.push_back(who + "random walk step must be non-negative");
          break;
        case GeneratorKind::script:
          for (auto& m : validate_schedule(RateSchedule{c.script, GeneratorKind::script}, p.theta)) {
            out.push_back(who + m);
          }
          break;
      }
    }
    for (auto& m : initial_sync_violations(sc)) out.push_back(std::move(m));
  }

  if (!sc.horizon_cycles && !sc.horizon_seconds) out.emplace_back("no horizon given");
  if (sc.horizon_cycles && sc.horizon_seconds) out.emplace_back("give horizon in cycles or in seconds, not both");
  if (sc.horizon_seconds && !(*sc.horizon_seconds > 0.0)) out.emplace_back("horizon_seconds must be positive");
  if (sc.sample_dt < 0.0) out.emplace_back("sample_dt must be non-negative");

  for (const auto& [idx, script] : sc.delay_scripts) {
    if (idx >= g.edge_count()) {
      out.push_back("delay script for missing edge " + std::to_string(idx));
      continue;
    }
    const auto& e = g.edge(idx);
    auto check = [&](const std::vector<double>& xs, double base, const char* dir) {
      for (double d : xs) {
        if (!(d >= base && d <= base + e.params.jitter)) {
          out.push_back("delay script edge " + std::to_string(idx) + " " + dir + ": " + num(d) + " outside [" +
                        num(base) + ", " + num(base + e.params.jitter) + "]");
          return;
        }
      }
    };
    check(script.fwd, e.params.fwd_delay, "fwd");
    check(script.bwd, e.params.bwd_delay, "bwd");
  }
  return out;
}

std::vector<std::string> scenario_warnings(const Scenario& sc) {
  std::vector<std::string> out;
  const auto& p = sc.params;
  if (p.theta > 1.0 && p.mu <= p.theta) {
    out.push_back("mu " + num(p.mu) + " <= theta " + num(p.theta) + ": fast mode catches up slowly");
  }
  // Upper side of the estimate bound needs eps_m to absorb the drift over one window.
  const double need = p.theta * (p.theta - 1.0) * (p.T + 2.0 * sc.graph.d_max() + p.p_max);
  for (std::size_t i = 0; i < sc.graph.edge_count(); ++i) {
    const auto& e = sc.graph.edge(i);
    if (e.params.eps_m < need) {
      out.push_back("edge " + std::to_string(i) + ": eps_m " + num(e.params.eps_m) + " below drift allowance " +
                    num(need) + "; estimates may overshoot");
    }
  }
  // Decisions only happen once per cycle; a fast node keeps its rate for the whole window.
  const double gain = ((1.0 + p.mu) * p.theta - 1.0) * p.T_stab;
  if (sc.graph.edge_count() > 0 && gain >= sc.graph.min_kappa()) {
    out.push_back("fast mode can gain " + num(gain) + " on a neighbor within one stabilising window, at least kappa_min " +
                  num(sc.graph.min_kappa()) + "; nodes may overshoot between decisions");
  }
  if (p.hysteresis > 0.0) out.emplace_back("hysteresis > 0: the conditions-imply-triggers check is skipped");
  return out;
}

std::vector<HardwareClock> build_clocks(const Scenario& sc, StreamRegistry& streams) {
  const double horizon = horizon_real_bound(sc);
  const double theta = sc.params.theta;
  std::vector<HardwareClock> out;
  out.reserve(sc.clocks.size());
  for (std::size_t v = 0; v < sc.clocks.size(); ++v) {
    const auto& c = sc.clocks[v];
    const std::string label = "clock/" + std::to_string(v);
    auto rng = streams.take(label);
    RateSchedule s;
    switch (c.kind) {
      case GeneratorKind::constant: s = constant_schedule(c.rate); break;
      case GeneratorKind::alternating: s = alternating_schedule(theta, c.period, c.start_high, horizon); break;
      case GeneratorKind::random_walk:
        if (c.walk_seed) rng = seeded_stream(*c.walk_seed, label);
        s = random_walk_schedule(theta, c.dwell, c.step, c.start_rate, horizon, rng);
        break;
      case GeneratorKind::script: s = RateSchedule{c.script, GeneratorKind::script}; break;
    }
    out.emplace_back(c.initial, std::move(s));
  }
  return out;
}

DelaySampler::DelaySampler(const NetworkGraph& g, StreamRegistry& streams,
                           const std::map<std::size_t, DelayScript>& scripts) {
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edge(i);
    const auto it = scripts.find(i);
    Direction fwd{e.params.fwd_delay, e.params.jitter, streams.take(dir_label("delay", e.u, e.v)), {}, 0};
    Direction bwd{e.params.bwd_delay, e.params.jitter, streams.take(dir_label("delay", e.v, e.u)), {}, 0};
    if (it != scripts.end()) {
      fwd.script = it->second.fwd;
      bwd.script = it->second.bwd;
    }
    dirs_.emplace(std::make_pair(e.u, e.v), std::move(fwd));
    dirs_.emplace(std::make_pair(e.v, e.u), std::move(bwd));
  }
}

DelaySampler::Direction& DelaySampler::direction(NodeId from, NodeId to) {
  auto it = dirs_.find({from, to});
  if (it == dirs_.end()) throw InternalError("no edge " + std::to_string(from) + " -> " + std::to_string(to));
  return it->second;
}

const DelaySampler::Direction& DelaySampler::direction(NodeId from, NodeId to) const {
  auto it = dirs_.find({from, to});
  if (it == dirs_.end()) throw InternalError("no edge " + std::to_string(from) + " -> " + std::to_string(to));
  return it->second;
}

double DelaySampler::sample(NodeId from, NodeId to) {
  auto& d = direction(from, to);
  if (!d.script.empty()) {
    const double x = d.script[d.next];
    d.next = (d.next + 1) % d.script.size();
    return x;
  }
  const double u = unit_draw(d.rng);
  return d.base + d.jitter * u;
}

double DelaySampler::upper(NodeId from, NodeId to) const {
  const auto& d = direction(from, to);
  return d.base + d.jitter;
}

double DelaySampler::lower(NodeId from, NodeId to) const { return direction(from, to).base; }

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::cycle_boundary: return "cycle_boundary";
    case EventKind::measure_end: return "measure_end";
    case EventKind::request_arrival: return "request_arrival";
    case EventKind::reply_emission: return "reply_emission";
    case EventKind::reply_arrival: return "reply_arrival";
    case EventKind::rate_breakpoint: return "rate_breakpoint";
    case EventKind::sample_tick: return "sample_tick";
  }
  return "?";
}

void EventQueue::push(Event e) {
  e.seq = seq_++;
  q_.push(e);
}

Event EventQueue::pop() {
  Event e = q_.top();
  q_.pop();
  return e;
}

Event deliver(DelaySampler& sampler, MessageKind kind, Payload payload, NodeId from, NodeId to,
              double send_real_time) {
  const double d = sampler.sample(from, to);
  Event e;
  e.time = send_real_time + d;
  e.node = to;
  e.peer = from;
  e.payload = payload;
  if (kind == MessageKind::request) {
    e.kind = EventKind::request_arrival;
    e.payload.fwd_delay = d;
  } else {
    e.kind = EventKind::reply_arrival;
    e.payload.bwd_delay = d;
  }
  return e;
}

std::uint64_t Trace::violation_total() const {
  std::uint64_t n = 0;
  for (const auto& [kind, c] : violation_counts) n += c;
  return n;
}

namespace {

struct Fatal {
  Violation v;
};

class Engine {
 public:
  Engine(const Scenario& sc, const RunOptions& opt)
      : sc_(sc),
        g_(sc.graph),
        p_(sc.params),
        opt_(opt),
        streams_(sc.seed),
        dist_(kappa_distances(sc.graph)) {
    auto hw = build_clocks(sc, streams_);
    sampler_.emplace(g_, streams_, sc.delay_scripts);
    for (NodeId v = 0; v < g_.node_count(); ++v) {
      proc_rng_.push_back({});
      for (const auto& adj : g_.neighbors(v)) proc_rng_[v].emplace(adj.node, streams_.take(dir_label("proc", adj.node, v)));
      nodes_.push_back(make_node(v, g_, LogicalClock(hw[v], p_.mu, p_.semantics)));
    }
    trace_.n = g_.node_count();
    trace_.s_max = p_.s_max;
    trace_.bounds = static_bounds(g_, p_.mu, p_.theta);
    end_bound_ = horizon_real_bound(sc);
  }

  Trace run() {
    try {
      start();
      loop();
    } catch (const Fatal& f) {
      trace_.aborted = true;
      record(f.v);
    }
    finish();
    return std::move(trace_);
  }

 private:
  // --- bookkeeping -----------------------------------------------------------------

  void record(Violation v) {
    auto& c = trace_.violation_counts[v.kind];
    if (c < opt_.max_violations_per_kind) trace_.violations.push_back(std::move(v));
    ++c;
  }

  [[noreturn]] void fatal(double t, std::string kind, std::string detail) {
    throw Fatal{{t, std::move(kind), std::move(detail)}};
  }

  Eigen::VectorXd logical_at(double t) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(nodes_.size()));
    for (std::size_t v = 0; v < nodes_.size(); ++v) out(static_cast<Eigen::Index>(v)) = nodes_[v].logical.value(t);
    return out;
  }

  std::uint64_t completed_cycles() const {
    std::uint64_t m = std::numeric_limits<std::uint64_t>::max();
    for (const auto& n : nodes_) m = std::min<std::uint64_t>(m, n.cycle_index == 0 ? 0 : n.cycle_index - 1);
    return nodes_.empty() ? 0 : m;
  }

  void schedule(Event e) { queue_.push(e); }

  // --- event loop ------------------------------------------------------------------

  void start() {
    for (auto& n : nodes_) {
      Event e;
      e.time = next_boundary_real(n, p_);
      e.kind = EventKind::cycle_boundary;
      e.node = n.id;
      schedule(e);
    }
    for (auto& n : nodes_) schedule_breakpoint(n.id, 0.0);
    if (sc_.sample_dt > 0.0) schedule_tick(1);
    if (sc_.horizon_seconds) {
      Event e;
      e.time = *sc_.horizon_seconds;
      e.kind = EventKind::sample_tick;
      schedule(e);
    }
    initial_checks();
  }

  void schedule_breakpoint(NodeId v, double after) {
    const auto bp = nodes_[v].logical.hardware().next_breakpoint(after);
    if (bp && *bp <= end_bound_) {
      Event e;
      e.time = *bp;
      e.kind = EventKind::rate_breakpoint;
      e.node = v;
      schedule(e);
    }
  }

  void schedule_tick(std::uint64_t k) {
    const double t = static_cast<double>(k) * sc_.sample_dt;
    if (t > end_bound_) return;
    Event e;
    e.time = t;
    e.kind = EventKind::sample_tick;
    e.node = k;  // tick index
    schedule(e);
  }

  bool done_after(double t) const {
    if (sc_.horizon_seconds) return t >= *sc_.horizon_seconds;
    return completed_cycles() >= *sc_.horizon_cycles;
  }

  void loop() {
    double last = 0.0;
    bool stop = false;
    while (!queue_.empty()) {
      if (sc_.horizon_seconds && queue_.top().time > *sc_.horizon_seconds) break;
      Event e = queue_.pop();
      if (e.time < last) {
        fatal(e.time, "event_order", std::string(to_string(e.kind)) + " at " + num(e.time) + " after " + num(last));
      }
      last = e.time;
      ++trace_.stats.events;
      handle(e);
      if (done_after(e.time)) stop = true;
      if (queue_.empty() || queue_.top().time > e.time) {
        take_sample(e.time);
        if (stop) break;
      }
    }
    trace_.end_time = last;
  }

  void handle(const Event& e) {
    switch (e.kind) {
      case EventKind::cycle_boundary: on_boundary(e); break;
      case EventKind::measure_end: on_measure_end(e); break;
      case EventKind::request_arrival: on_request(e); break;
      case EventKind::reply_emission: on_reply_emission(e); break;
      case EventKind::reply_arrival: on_reply(e); break;
      case EventKind::rate_breakpoint: schedule_breakpoint(e.node, e.time); break;
      case EventKind::sample_tick:
        if (e.node > 0) schedule_tick(e.node + 1);  // node 0 marks the closing horizon tick
        break;
    }
  }

  void on_boundary(const Event& e) {
    auto& node = nodes_[e.node];
    BoundaryActions act;
    try {
      act = cycle_boundary(node, e.time, p_);
    } catch (const InternalError& err) {
      fatal(e.time, "internal", err.what());
    }
    for (const auto& r : act.requests) {
      Payload pl;
      pl.l_v_t1 = r.msg.l_v_t1;
      pl.sent_real = e.time;
      schedule(deliver(*sampler_, MessageKind::request, pl, node.id, r.to, e.time));
    }
    Event end;
    end.time = act.measure_end_real;
    end.kind = EventKind::measure_end;
    end.node = node.id;
    schedule(end);
  }

  void on_request(const Event& e) {
    auto& rng = proc_rng_[e.node].at(e.peer);
    const double proc = p_.p_max * unit_draw(rng);
    Event out;
    out.time = e.time + proc;
    out.kind = EventKind::reply_emission;
    out.node = e.node;
    out.peer = e.peer;
    out.payload = e.payload;
    out.payload.l_w_t2 = nodes_[e.node].logical.value(e.time);
    out.payload.processing = proc;
    schedule(out);
  }

  void on_reply_emission(const Event& e) {
    Payload pl = e.payload;
    pl.l_w_t3 = nodes_[e.node].logical.value(e.time);
    // Reply travels back to the requester (e.peer).
    schedule(deliver(*sampler_, MessageKind::reply, pl, e.node, e.peer, e.time));
  }

  void on_reply(const Event& e) {
    auto& node = nodes_[e.node];
    const NodeId w = e.peer;
    auto it = node.pending.find(w);
    if (it == node.pending.end() || it->second != e.payload.l_v_t1 || node.phase != Phase::measuring) {
      fatal(e.time, "stale_reply",
            "node " + std::to_string(node.id) + " got an unexpected reply from " + std::to_string(w));
    }
    node.pending.erase(it);
    MeasurementRecord rec{w, e.payload.l_v_t1, e.payload.l_w_t2, e.payload.l_w_t3, node.logical.value(e.time), e.time};
    const auto& edge = g_.edge(*g_.find_edge(node.id, w));
    const double window = timeout_window(g_.d_max(), p_.p_max, edge.params.eps_m, p_.theta);
    if (!(rec.l_v_t4 - rec.l_v_t1 < window)) {
      fatal(e.time, "timeout",
            "node " + std::to_string(node.id) + " waited " + num(rec.l_v_t4 - rec.l_v_t1) + " for neighbor " +
                std::to_string(w) + ", window " + num(window));
    }
    NeighborEstimate est;
    try {
      est = compute_estimates(rec, edge.params.eps_d, edge.params.eps_m, p_.theta, node.cycle_index);
    } catch (const InternalError& err) {
      fatal(e.time, "internal", err.what());
    }
    node.views[w] = est;
    ++trace_.stats.measurements;
    if (opt_.record_measurements) {
      MeasurementLog m;
      m.v = node.id;
      m.w = w;
      m.cycle = node.cycle_index;
      m.record = rec;
      m.estimate = est;
      m.t1_real = e.payload.sent_real;
      m.t4_real = e.time;
      m.fwd_delay = e.payload.fwd_delay;
      m.bwd_delay = e.payload.bwd_delay;
      m.processing = e.payload.processing;
      const double mid = 0.5 * (m.t1_real + m.t4_real);
      m.true_offset_mid = nodes_[w].logical.value(mid) - node.logical.value(mid);
      trace_.measurements.push_back(m);
    }
  }

  void on_measure_end(const Event& e) {
    auto& node = nodes_[e.node];
    if (!node.pending.empty()) {
      fatal(e.time, "missing_reply",
            "node " + std::to_string(node.id) + " ended measuring with " + std::to_string(node.pending.size()) +
                " outstanding requests");
    }
    std::vector<NeighborView> views;
    try {
      views = neighbor_views(node, g_, e.time);
    } catch (const std::logic_error& err) {
      fatal(e.time, "internal", err.what());
    }
    const double l_v = node.logical.value(e.time);
    const std::size_t s_max = p_.s_max;
    std::vector<std::uint8_t> st(s_max), ft(s_max);
    for (std::size_t s = 1; s <= s_max; ++s) {
      st[s - 1] = slow_trigger(l_v, views, s, p_.hysteresis);
      ft[s - 1] = fast_trigger(l_v, views, s, p_.hysteresis);
    }
    const ModeDecision d = evaluate_mode(l_v, views, s_max, p_.hysteresis);
    ++trace_.stats.evaluations;
    trace_.stats.level_checks += s_max;
    if (d == ModeDecision::fast) ++trace_.stats.fast_decisions;

    if (opt_.monitors) evaluation_checks(e.time, node, views, st, ft);

    if (opt_.record_decisions) trace_.decisions.push_back({e.time, node.id, node.cycle_index, d, st, ft});

    apply_decision(node, d, p_, e.time);
    Event next;
    next.time = next_boundary_real(node, p_);
    next.kind = EventKind::cycle_boundary;
    next.node = node.id;
    schedule(next);
  }

  // --- oracles ---------------------------------------------------------------------

  void evaluation_checks(double t, const NodeState& node, const std::vector<NeighborView>& views,
                         const std::vector<std::uint8_t>& st, const std::vector<std::uint8_t>& ft) {
    const std::string who = "node " + std::to_string(node.id) + " cycle " + std::to_string(node.cycle_index);
    for (const auto& x : views) {
      ++trace_.stats.estimate_uses;
      const double truth = nodes_[x.neighbor].logical.value(t);
      const double excess = x.estimate - truth;
      trace_.stats.max_estimate_excess = std::max(trace_.stats.max_estimate_excess, excess);
      trace_.stats.max_estimate_shortfall = std::max(trace_.stats.max_estimate_shortfall, -excess);
      if (excess > kTol) {
        record({t, "estimate_above_truth",
                who + ": estimate of " + std::to_string(x.neighbor) + " exceeds its clock by " + num(excess)});
      }
      if (-excess > x.delta + kTol) {
        record({t, "estimate_below_bound",
                who + ": estimate of " + std::to_string(x.neighbor) + " trails its clock by " + num(-excess) +
                    " > delta " + num(x.delta)});
      }
    }
    for (std::size_t a = 0; a < st.size(); ++a) {
      for (std::size_t b = 0; b < ft.size(); ++b) {
        if (st[a] && ft[b]) {
          record({t, "trigger_overlap",
                  who + ": slow trigger at level " + std::to_string(a + 1) + " and fast trigger at level " +
                      std::to_string(b + 1)});
        }
      }
    }
    if (p_.hysteresis != 0.0) return;
    const Eigen::VectorXd L = logical_at(t);
    for (std::size_t s = 1; s <= st.size(); ++s) {
      if (fast_condition(g_, L, node.id, s) && !ft[s - 1]) {
        record({t, "fast_condition_without_trigger", who + ": level " + std::to_string(s)});
      }
      if (slow_condition(g_, L, node.id, s) && !st[s - 1]) {
        record({t, "slow_condition_without_trigger", who + ": level " + std::to_string(s)});
      }
    }
  }

  void initial_checks() {
    const Eigen::VectorXd L = logical_at(0.0);
    bool within = true;
    for (const auto& e : g_.edges()) {
      if (std::abs(L(static_cast<Eigen::Index>(e.u)) - L(static_cast<Eigen::Index>(e.v))) > e.kappa) within = false;
    }
    trace_.initial_within_kappa = within;
    trace_.psi_at_zero.resize(static_cast<Eigen::Index>(p_.s_max));
    for (std::size_t s = 1; s <= p_.s_max; ++s) {
      const double psi = level_potential(L, dist_, s).value;
      trace_.psi_at_zero(static_cast<Eigen::Index>(s - 1)) = psi;
      if (opt_.monitors && within && psi != 0.0) {
        record({0.0, "initial_potential", "Psi^" + std::to_string(s) + "(0) = " + num(psi)});
      }
    }
  }

  void take_sample(double t) {
    if (has_prev_ && t == prev_.t_real) return;
    const auto n = static_cast<Eigen::Index>(nodes_.size());
    const auto s_max = static_cast<Eigen::Index>(p_.s_max);
    SkewSample smp;
    smp.t_real = t;
    smp.logical = logical_at(t);
    smp.hardware.resize(n);
    smp.mode.resize(nodes_.size());
    for (Eigen::Index v = 0; v < n; ++v) {
      const auto& node = nodes_[static_cast<std::size_t>(v)];
      smp.hardware(v) = node.logical.hardware().value(t);
      smp.mode[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(node.logical.mode_at(t));
    }
    smp.local_skew = local_skew(g_, smp.logical);
    smp.global_skew = global_skew(smp.logical);
    smp.psi.resize(s_max);
    smp.node_psi.resize(n, s_max);
    for (Eigen::Index s = 1; s <= s_max; ++s) {
      smp.node_psi.col(s - 1) = node_potentials(smp.logical, dist_, static_cast<std::size_t>(s));
      smp.psi(s - 1) = smp.node_psi.col(s - 1).maxCoeff();
    }
    smp.leading_node = leading_node(smp.logical, dist_, level_potential(smp.logical, dist_, 1).node, 1);
    smp.edge_offsets.resize(static_cast<Eigen::Index>(g_.edge_count()));
    for (std::size_t i = 0; i < g_.edge_count(); ++i) {
      const auto& e = g_.edge(i);
      smp.edge_offsets(static_cast<Eigen::Index>(i)) =
          smp.logical(static_cast<Eigen::Index>(e.v)) - smp.logical(static_cast<Eigen::Index>(e.u));
    }
    ++trace_.stats.samples;

    auto& b = trace_.bounds;
    b.max_observed_local = std::max(b.max_observed_local, smp.local_skew);
    b.max_observed_global = std::max(b.max_observed_global, smp.global_skew);
    for (std::size_t i = 0; i < g_.edge_count(); ++i) {
      b.max_observed_edge[i] = std::max(b.max_observed_edge[i], std::abs(smp.edge_offsets(static_cast<Eigen::Index>(i))));
    }
    if (smp.global_skew > b.global_bound + kTol && !trace_.first_global_exceed) trace_.first_global_exceed = t;

    if (has_prev_) {
      for (const auto& node : nodes_) {
        if (!check_lipschitz(node.logical.hardware(), prev_.t_real, t, p_.theta)) {
          fatal(t, "lipschitz", "hardware clock of node " + std::to_string(node.id) + " left the drift envelope");
        }
      }
    }
    if (opt_.monitors) sample_checks(smp);

    if (opt_.record_samples) trace_.samples.push_back(smp);
    prev_ = std::move(smp);
    has_prev_ = true;
  }

  void sample_checks(const SkewSample& smp) {
    const double t = smp.t_real;
    auto& b = trace_.bounds;
    if (smp.local_skew > smp.global_skew + kTol) {
      record({t, "local_above_global", num(smp.local_skew) + " > " + num(smp.global_skew)});
    }
    if (smp.local_skew > b.local_bound + kTol) {
      b.local_satisfied = false;
      record({t, "local_bound", "local skew " + num(smp.local_skew) + " > " + num(b.local_bound)});
    }
    if (smp.global_skew > b.global_bound + kTol) {
      b.global_satisfied = false;
      record({t, "global_bound", "global skew " + num(smp.global_skew) + " > " + num(b.global_bound)});
    }
    // Per-edge bounds are reported in the summary only; the theorem fixes a single kappa.
    for (std::size_t s = 1; s <= p_.s_max; ++s) {
      for (auto& m : leading_lemma_failures(g_, smp.logical, dist_, s)) record({t, "leading_without_slow", m});
      for (auto& m : trailing_lemma_failures(g_, smp.logical, dist_, s)) record({t, "trailing_without_fast", m});
    }
    if (has_prev_) {
      const double allowance = (p_.theta - 1.0) * (t - prev_.t_real);
      for (Eigen::Index s = 0; s < smp.node_psi.cols(); ++s) {
        for (Eigen::Index w = 0; w < smp.node_psi.rows(); ++w) {
          const double growth = smp.node_psi(w, s) - prev_.node_psi(w, s);
          if (growth > allowance + kTol) {
            record({t, "corollary1",
                    "node " + std::to_string(w) + " level " + std::to_string(s + 1) + ": potential grew " +
                        num(growth) + " over [" + num(prev_.t_real) + ", " + num(t) + "], allowed " + num(allowance)});
          }
        }
      }
    }
  }

  void finish() {
    trace_.cycles_completed = completed_cycles();
    auto& b = trace_.bounds;
    b.local_satisfied = b.max_observed_local <= b.local_bound + kTol;
    b.global_satisfied = b.max_observed_global <= b.global_bound + kTol;
    b.edge_local_satisfied = true;
    for (std::size_t i = 0; i < b.edge_local_bounds.size(); ++i) {
      if (b.max_observed_edge[i] > b.edge_local_bounds[i] + kTol) b.edge_local_satisfied = false;
    }
  }

  const Scenario& sc_;
  const NetworkGraph& g_;
  const GcsParams& p_;
  RunOptions opt_;
  StreamRegistry streams_;
  Eigen::MatrixXd dist_;
  std::optional<DelaySampler> sampler_;
  std::vector<std::map<NodeId, std::mt19937_64>> proc_rng_;
  std::vector<NodeState> nodes_;
  EventQueue queue_;
  Trace trace_;
  double end_bound_ = 0.0;
  SkewSample prev_;
  bool has_prev_ = false;
};

}  // namespace

Trace run(const Scenario& sc, const RunOptions& opt) {
  const auto problems = validate_scenario(sc);
  if (!problems.empty()) {
    std::string msg = "scenario invalid:";
    for (const auto& m : problems) msg += "\n  " + m;
    throw ConfigError(msg);
  }
  return Engine(sc, opt).run();
}

std::vector<Violation> corollary1_check(const Trace& trace, std::size_t s, double theta, double tol) {
  return corollary1_check(std::span<const SkewSample>(trace.samples), s, theta, tol);
}

}  // namespace gcs
