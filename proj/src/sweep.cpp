#include "gcs/sweep.hpp"

#include "gcs/engine.hpp"
#include "gcs/errors.hpp"
#include "gcs/report.hpp"
#include "gcs/scenario.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace gcs {

using json = nlohmann::json;

namespace {

const std::vector<std::string> kAxes = {"theta", "mu", "eps_d", "eps_m", "jitter", "n"};

}  // namespace

SweepGrid parse_sweep_grid(const json& doc) {
  if (!doc.is_object()) throw ParseError("sweep grid: expected an object of axis lists");
  SweepGrid g;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (std::find(kAxes.begin(), kAxes.end(), it.key()) == kAxes.end()) {
      throw ParseError("sweep grid: unknown axis \"" + it.key() + "\"");
    }
    if (!it->is_array() || it->empty()) throw ParseError("sweep grid: axis \"" + it.key() + "\" needs a non-empty list");
    auto& vals = g.axes[it.key()];
    for (const auto& v : *it) {
      if (!v.is_number()) throw ParseError("sweep grid: axis \"" + it.key() + "\" has a non-numeric value");
      vals.push_back(v.get<double>());
    }
  }
  return g;
}

std::vector<SweepPoint> expand_grid(const SweepGrid& grid) {
  std::vector<SweepPoint> out{SweepPoint{}};
  for (const auto& axis : kAxes) {
    auto it = grid.axes.find(axis);
    if (it == grid.axes.end()) continue;
    std::vector<SweepPoint> next;
    for (const auto& p : out) {
      for (double v : it->second) {
        auto q = p;
        q[axis] = v;
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  return out;
}

json apply_point(const json& scenario, const SweepPoint& point) {
  json doc = scenario;
  for (const auto& [axis, value] : point) {
    if (axis == "theta" || axis == "mu") {
      doc["clocks"][axis] = value;
    } else if (axis == "n") {
      auto& g = doc["graph"];
      if (!g.contains("generator")) throw ConfigError("axis n needs a generated graph");
      auto& gen = g["generator"];
      const auto kind = gen.value("kind", std::string());
      if (kind != "line" && kind != "ring" && kind != "star" && kind != "random") {
        throw ConfigError("axis n does not apply to a " + kind + " generator");
      }
      if (value < 1.0 || value != std::floor(value)) throw ConfigError("axis n needs positive integers");
      gen["n"] = static_cast<std::uint64_t>(value);
    } else {
      auto& g = doc["graph"];
      g["edge_defaults"][axis] = value;
      if (g.contains("edges") && g["edges"].is_array()) {
        for (auto& e : g["edges"]) e[axis] = value;
      }
    }
  }
  return doc;
}

namespace {

SweepRow run_one(const json& scenario, const std::filesystem::path& base_dir, std::size_t index,
                 const SweepPoint& point, std::uint64_t seed) {
  SweepRow row;
  row.point = index;
  row.seed = seed;
  row.values = point;
  try {
    auto loaded = scenario_from_json(apply_point(scenario, point), base_dir);
    auto& sc = loaded.scenario;
    sc.seed = seed;
    for (const auto& e : sc.graph.edges()) {
      row.edge_worst_delay.push_back(e.params.worst_delay());
      row.edge_kappa.push_back(e.kappa);
    }
    const auto problems = validate_scenario(sc);
    if (!problems.empty()) {
      row.status = "invalid";
      row.exit_code = 3;
      row.error = problems.front();
      return row;
    }
    RunOptions opt;
    opt.record_samples = false;
    opt.max_violations_per_kind = 1;
    const Trace t = run(sc, opt);
    row.max_local = t.bounds.max_observed_local;
    row.max_global = t.bounds.max_observed_global;
    row.local_bound = t.bounds.local_bound;
    row.global_bound = t.bounds.global_bound;
    row.violations = t.violation_total();
    row.cycles = t.cycles_completed;
    row.status = row.violations == 0 && !t.aborted ? "ok" : "violations";
    row.exit_code = row.status == "ok" ? 0 : 4;
    if (!t.violations.empty()) row.error = t.violations.front().kind + ": " + t.violations.front().detail;
  } catch (const ParseError& e) {
    row.status = "parse_error";
    row.exit_code = 2;
    row.error = e.what();
  } catch (const ConfigError& e) {
    row.status = "invalid";
    row.exit_code = 3;
    row.error = e.what();
  } catch (const std::exception& e) {
    row.status = "error";
    row.exit_code = 1;
    row.error = e.what();
  }
  return row;
}

std::string csv_field(std::string s) {
  for (auto& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::vector<SweepRow> run_sweep(const json& scenario, const std::filesystem::path& base_dir, const SweepGrid& grid,
                                const std::vector<std::uint64_t>& seeds, std::size_t threads) {
  const auto points = expand_grid(grid);
  std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (auto s : seeds) jobs.emplace_back(i, s);
  }
  std::vector<SweepRow> rows(jobs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(jobs.size(), 1));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      rows[j] = run_one(scenario, base_dir, jobs[j].first, points[jobs[j].first], jobs[j].second);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "point,seed";
  for (const auto& a : kAxes) out << "," << a;
  out << ",status,exit_code,cycles,max_local_skew,max_global_skew,local_bound,global_bound,local_slack,global_slack,"
         "violations,delta_over_d_min,delta_over_d_max,error\n";
  for (const auto& r : rows) {
    out << r.point << "," << r.seed;
    for (const auto& a : kAxes) {
      auto it = r.values.find(a);
      out << "," << (it == r.values.end() ? std::string() : format_double(it->second));
    }
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < r.edge_kappa.size(); ++i) {
      const double ratio = r.edge_kappa[i] / r.edge_worst_delay[i];
      lo = i == 0 ? ratio : std::min(lo, ratio);
      hi = i == 0 ? ratio : std::max(hi, ratio);
    }
    const bool ran = r.status == "ok" || r.status == "violations";
    auto num = [&](double x) { return ran ? format_double(x) : std::string(); };
    out << "," << r.status << "," << r.exit_code << "," << r.cycles << "," << num(r.max_local) << ","
        << num(r.max_global) << "," << num(r.local_bound) << "," << num(r.global_bound) << ","
        << num(r.local_bound - r.max_local) << "," << num(r.global_bound - r.max_global) << "," << r.violations
        << "," << (r.edge_kappa.empty() ? "" : format_double(lo)) << ","
        << (r.edge_kappa.empty() ? "" : format_double(hi)) << "," << csv_field(r.error) << "\n";
  }
}

void write_sweep_edges_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "point,seed,edge,worst_delay,kappa,delta_over_d\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.edge_kappa.size(); ++i) {
      out << r.point << "," << r.seed << "," << i << "," << format_double(r.edge_worst_delay[i]) << ","
          << format_double(r.edge_kappa[i]) << "," << format_double(r.edge_kappa[i] / r.edge_worst_delay[i]) << "\n";
    }
  }
}

}  // namespace gcs
