#include "gcs/report.hpp"

#include "gcs/errors.hpp"
#include "gcs/metrics.hpp"

#include <cstdio>
#include <fstream>

namespace gcs {

using json = nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

StaticReport static_report(const Scenario& sc) {
  const auto& g = sc.graph;
  const auto& p = sc.params;
  StaticReport r;
  r.theta = p.theta;
  r.mu = p.mu;
  r.sigma = correction_to_drift(p.mu, p.theta);
  if (!(r.sigma > 1.0)) throw ParameterError("sigma " + format_double(r.sigma) + " must exceed 1 (needs mu > theta - 1)");
  for (const auto& e : g.edges()) {
    r.edge_kappa.push_back(e.kappa);
    r.timeout_window = std::max(r.timeout_window, timeout_window(g.d_max(), p.p_max, e.params.eps_m, p.theta));
  }
  r.kappa_min = g.min_kappa();
  r.kappa_max = g.max_kappa();
  const auto b = static_bounds(g, p.mu, p.theta);
  r.kappa_diameter = b.kappa_diameter;
  r.hop_diameter = hop_diameter(g);
  r.global_bound = b.global_bound;
  r.local_bound = b.local_bound;
  r.edge_local_bounds = b.edge_local_bounds;
  r.s_max = p.s_max;
  return r;
}

std::string format_static_report(const StaticReport& r) {
  std::string s;
  auto line = [&](const std::string& k, const std::string& v) { s += k + " " + v + "\n"; };
  line("theta", format_double(r.theta));
  line("mu", format_double(r.mu));
  line("sigma", format_double(r.sigma));
  line("kappa_min", format_double(r.kappa_min));
  line("kappa_max", format_double(r.kappa_max));
  line("kappa_diameter", format_double(r.kappa_diameter));
  line("hop_diameter", std::to_string(r.hop_diameter));
  line("global_bound", format_double(r.global_bound));
  line("local_bound", format_double(r.local_bound));
  line("timeout_window", format_double(r.timeout_window));
  line("s_max", std::to_string(r.s_max));
  for (std::size_t i = 0; i < r.edge_kappa.size(); ++i) {
    line("edge " + std::to_string(i), "kappa " + format_double(r.edge_kappa[i]) + " local_bound " +
                                          format_double(r.edge_local_bounds[i]));
  }
  return s;
}

json to_json(const StaticReport& r) {
  return json{{"theta", r.theta},
              {"mu", r.mu},
              {"sigma", r.sigma},
              {"edge_kappa", r.edge_kappa},
              {"kappa_min", r.kappa_min},
              {"kappa_max", r.kappa_max},
              {"kappa_diameter", r.kappa_diameter},
              {"hop_diameter", r.hop_diameter},
              {"global_bound", r.global_bound},
              {"local_bound", r.local_bound},
              {"edge_local_bounds", r.edge_local_bounds},
              {"timeout_window", r.timeout_window},
              {"s_max", r.s_max}};
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  std::string buf = "t_real";
  for (std::size_t i = 0; i < trace.n; ++i) {
    const auto id = std::to_string(i);
    buf += ",node_" + id + "_L,node_" + id + "_H,node_" + id + "_mode";
  }
  buf += ",local_skew,global_skew";
  for (std::size_t s = 1; s <= trace.s_max; ++s) buf += ",psi_s" + std::to_string(s);
  buf += ",bound_local,bound_global\n";
  const std::string bounds = "," + format_double(trace.bounds.local_bound) + "," +
                             format_double(trace.bounds.global_bound) + "\n";
  for (const auto& smp : trace.samples) {
    buf += format_double(smp.t_real);
    for (std::size_t i = 0; i < trace.n; ++i) {
      const auto v = static_cast<Eigen::Index>(i);
      buf += ',';
      buf += format_double(smp.logical(v));
      buf += ',';
      buf += format_double(smp.hardware(v));
      buf += smp.mode[i] ? ",1" : ",0";
    }
    buf += ',';
    buf += format_double(smp.local_skew);
    buf += ',';
    buf += format_double(smp.global_skew);
    for (Eigen::Index s = 0; s < smp.psi.size(); ++s) {
      buf += ',';
      buf += format_double(smp.psi(s));
    }
    buf += bounds;
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

json summary_json(const Trace& trace, const std::string& scenario_hash, std::uint64_t seed) {
  const auto& b = trace.bounds;
  const auto total = trace.violation_total();
  json counts = json::object();
  for (const auto& [k, c] : trace.violation_counts) counts[k] = c;
  std::vector<double> psi0(trace.psi_at_zero.data(), trace.psi_at_zero.data() + trace.psi_at_zero.size());
  const auto& st = trace.stats;
  json j;
  j["scenario_hash"] = scenario_hash;
  j["seed"] = seed;
  j["nodes"] = trace.n;
  j["s_max"] = trace.s_max;
  j["cycles_completed"] = trace.cycles_completed;
  j["end_time"] = trace.end_time;
  j["aborted"] = trace.aborted;
  j["violation_count"] = total;
  j["violation_counts"] = counts;
  j["bounds"] = {{"sigma", b.sigma},
                 {"kappa_max", b.kappa_max},
                 {"kappa_diameter", b.kappa_diameter},
                 {"local_bound", b.local_bound},
                 {"global_bound", b.global_bound},
                 {"edge_local_bounds", b.edge_local_bounds},
                 {"max_observed_local", b.max_observed_local},
                 {"max_observed_global", b.max_observed_global},
                 {"max_observed_edge", b.max_observed_edge}};
  j["satisfied"] = {{"local", b.local_satisfied},
                    {"global", b.global_satisfied},
                    {"edge_local", b.edge_local_satisfied},
                    {"no_violations", total == 0 && !trace.aborted}};
  j["psi_at_zero"] = psi0;
  j["initial_within_kappa"] = trace.initial_within_kappa;
  j["first_global_exceed"] = trace.first_global_exceed ? json(*trace.first_global_exceed) : json(nullptr);
  j["stats"] = {{"events", st.events},
                {"samples", st.samples},
                {"measurements", st.measurements},
                {"evaluations", st.evaluations},
                {"level_checks", st.level_checks},
                {"estimate_uses", st.estimate_uses},
                {"fast_decisions", st.fast_decisions},
                {"max_estimate_excess", st.estimate_uses ? st.max_estimate_excess : 0.0},
                {"max_estimate_shortfall", st.max_estimate_shortfall}};
  return j;
}

json violations_json(const Trace& trace) {
  json arr = json::array();
  for (const auto& v : trace.violations) arr.push_back({{"time", v.time}, {"kind", v.kind}, {"detail", v.detail}});
  return arr;
}

void write_run_outputs(const std::filesystem::path& dir, const Trace& trace, const std::string& scenario_hash,
                       std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "trace.csv", std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (dir / "trace.csv").string());
    write_trace_csv(f, trace);
  }
  {
    std::ofstream f(dir / "summary.json", std::ios::binary);
    f << summary_json(trace, scenario_hash, seed).dump(2) << "\n";
  }
  {
    std::ofstream f(dir / "violations.json", std::ios::binary);
    f << violations_json(trace).dump(2) << "\n";
  }
}

}  // namespace gcs
