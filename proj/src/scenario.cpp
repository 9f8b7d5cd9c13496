#include "gcs/scenario.hpp"

#include "gcs/errors.hpp"
#include "gcs/random.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace gcs {

using json = nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) { throw ParseError(path + ": " + msg); }

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) schema(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; });
    if (!known) schema(path, "unknown key \"" + it.key() + "\"");
  }
}

std::string sub(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number(const json& obj, const char* key, const std::string& path, std::optional<double> def = {}) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (def) return *def;
    schema(path, std::string("missing key \"") + key + "\"");
  }
  if (!it->is_number()) schema(sub(path, key), "expected a number");
  return it->get<double>();
}

std::uint64_t count(const json& obj, const char* key, const std::string& path, std::optional<std::uint64_t> def = {}) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (def) return *def;
    schema(path, std::string("missing key \"") + key + "\"");
  }
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_number_integer() && it->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(it->get<std::int64_t>());
  schema(sub(path, key), "expected a non-negative integer");
}

bool boolean(const json& obj, const char* key, const std::string& path, bool def) {
  auto it = obj.find(key);
  if (it == obj.end()) return def;
  if (!it->is_boolean()) schema(sub(path, key), "expected true or false");
  return it->get<bool>();
}

std::string text(const json& obj, const char* key, const std::string& path, std::optional<std::string> def = {}) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (def) return *def;
    schema(path, std::string("missing key \"") + key + "\"");
  }
  if (!it->is_string()) schema(sub(path, key), "expected a string");
  return it->get<std::string>();
}

std::vector<double> numbers(const json& arr, const std::string& path) {
  if (!arr.is_array()) schema(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) schema(at(path, i), "expected a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- graph ----------------------------------------------------------------------------

constexpr std::initializer_list<const char*> kEdgeParamKeys = {"fwd_delay", "bwd_delay", "jitter",
                                                               "eps_d",     "eps_m",     "length"};

EdgeParams edge_params(const json& obj, const std::string& path, const EdgeParams& base) {
  EdgeParams p = base;
  p.fwd_delay = number(obj, "fwd_delay", path, base.fwd_delay);
  p.bwd_delay = number(obj, "bwd_delay", path, base.bwd_delay);
  p.jitter = number(obj, "jitter", path, base.jitter);
  p.eps_d = number(obj, "eps_d", path, base.eps_d);
  p.eps_m = number(obj, "eps_m", path, base.eps_m);
  p.length = number(obj, "length", path, base.length);
  return p;
}

NetworkGraph graph_from_generator(const json& gen, const std::string& path, double d_max, const EdgeParams& ep) {
  if (!gen.is_object()) schema(path, "expected an object");
  const std::string kind = text(gen, "kind", path);
  if (kind == "line") {
    only_keys(gen, path, {"kind", "n"});
    return make_line(count(gen, "n", path), d_max, ep);
  }
  if (kind == "ring") {
    only_keys(gen, path, {"kind", "n"});
    return make_ring(count(gen, "n", path), d_max, ep);
  }
  if (kind == "grid") {
    only_keys(gen, path, {"kind", "rows", "cols"});
    return make_grid(count(gen, "rows", path), count(gen, "cols", path), d_max, ep);
  }
  if (kind == "star") {
    only_keys(gen, path, {"kind", "n"});
    return make_star(count(gen, "n", path), d_max, ep);
  }
  if (kind == "random") {
    only_keys(gen, path, {"kind", "n", "p", "seed"});
    return make_random(count(gen, "n", path), number(gen, "p", path, 0.0), count(gen, "seed", path, 0), d_max, ep);
  }
  schema(sub(path, "kind"), "unknown graph generator \"" + kind + "\"");
}

NetworkGraph parse_graph(const json& g, const std::string& path) {
  only_keys(g, path, {"nodes", "d_max", "edges", "generator", "edge_defaults", "delay_scripts"});
  const double d_max = number(g, "d_max", path);
  EdgeParams defaults;
  if (auto it = g.find("edge_defaults"); it != g.end()) {
    only_keys(*it, sub(path, "edge_defaults"), kEdgeParamKeys);
    defaults = edge_params(*it, sub(path, "edge_defaults"), defaults);
  }
  const bool has_gen = g.contains("generator");
  const bool has_edges = g.contains("edges");
  if (has_gen == has_edges) schema(path, "give exactly one of \"edges\" and \"generator\"");
  if (has_gen) {
    if (g.contains("nodes")) schema(path, "\"nodes\" comes from the generator; remove it");
    return graph_from_generator(g["generator"], sub(path, "generator"), d_max, defaults);
  }
  const auto n = count(g, "nodes", path);
  const auto& arr = g["edges"];
  const std::string epath = sub(path, "edges");
  if (!arr.is_array()) schema(epath, "expected an array");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& e = arr[i];
    const auto p = at(epath, i);
    only_keys(e, p, {"u", "v", "fwd_delay", "bwd_delay", "jitter", "eps_d", "eps_m", "length"});
    edges.push_back({count(e, "u", p), count(e, "v", p), edge_params(e, p, defaults), 0.0});
  }
  return NetworkGraph(n, d_max, std::move(edges));
}

std::map<std::size_t, DelayScript> parse_delay_scripts(const json& g, const std::string& path,
                                                        const std::filesystem::path& base_dir) {
  std::map<std::size_t, DelayScript> out;
  auto it = g.find("delay_scripts");
  if (it == g.end()) return out;
  if (!it->is_array()) schema(path, "expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& d = (*it)[i];
    const auto p = at(path, i);
    only_keys(d, p, {"edge", "fwd", "bwd", "file"});
    const auto edge = count(d, "edge", p);
    DelayScript s;
    json src = d;
    if (d.contains("file")) {
      if (d.contains("fwd") || d.contains("bwd")) schema(p, "give \"file\" or inline delays, not both");
      const auto file = base_dir / text(d, "file", p);
      try {
        src = json::parse(read_file(file));
      } catch (const json::parse_error& e) {
        throw ParseError(file.string() + ": " + e.what());
      }
      only_keys(src, file.string(), {"fwd", "bwd"});
    }
    if (src.contains("fwd")) s.fwd = numbers(src["fwd"], sub(p, "fwd"));
    if (src.contains("bwd")) s.bwd = numbers(src["bwd"], sub(p, "bwd"));
    if (!out.emplace(edge, std::move(s)).second) schema(p, "second delay script for edge " + std::to_string(edge));
  }
  return out;
}

// --- clocks ---------------------------------------------------------------------------

std::vector<RateSegment> segments_from_csv(const std::filesystem::path& file) {
  std::istringstream in(read_file(file));
  std::vector<RateSegment> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    double t = 0.0;
    double r = 0.0;
    if (std::sscanf(line.c_str(), "%lf ,%lf", &t, &r) != 2) {
      if (out.empty() && lineno == 1) continue;  // header
      throw ParseError(file.string() + ": expected \"start,rate\"", lineno, 1);
    }
    out.push_back({t, r});
  }
  return out;
}

ClockSpec parse_clock(const json& c, const std::string& path, NodeId v, const Eigen::MatrixXi& hops,
                      const std::filesystem::path& base_dir) {
  ClockSpec s;
  s.initial = number(c, "initial_value", path, 0.0);
  const std::string gen = text(c, "generator", path, std::string("constant"));
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (c.contains(k)) schema(path, std::string("key \"") + k + "\" does not apply to generator " + gen);
    }
  };
  if (gen == "constant") {
    forbid({"period", "start_high", "dwell", "step", "start_rate", "seed", "segments", "file"});
    s.kind = GeneratorKind::constant;
    s.rate = number(c, "rate", path, 1.0);
  } else if (gen == "alternating") {
    forbid({"rate", "dwell", "step", "start_rate", "seed", "segments", "file"});
    s.kind = GeneratorKind::alternating;
    s.period = number(c, "period", path);
    auto it = c.find("start_high");
    if (it == c.end()) {
      s.start_high = true;
    } else if (it->is_boolean()) {
      s.start_high = it->get<bool>();
    } else if (it->is_string() && (*it == "hop_even" || *it == "hop_odd")) {
      const bool even = hops(0, static_cast<Eigen::Index>(v)) % 2 == 0;
      s.start_high = (*it == "hop_even") == even;
    } else {
      schema(sub(path, "start_high"), "expected true, false, \"hop_even\" or \"hop_odd\"");
    }
  } else if (gen == "random_walk") {
    forbid({"rate", "period", "start_high", "segments", "file"});
    s.kind = GeneratorKind::random_walk;
    s.dwell = number(c, "dwell", path);
    s.step = number(c, "step", path);
    s.start_rate = number(c, "start_rate", path, 1.0);
    if (c.contains("seed")) s.walk_seed = count(c, "seed", path);
  } else if (gen == "script") {
    forbid({"rate", "period", "start_high", "dwell", "step", "start_rate", "seed"});
    s.kind = GeneratorKind::script;
    if (c.contains("file") == c.contains("segments")) schema(path, "script needs exactly one of \"segments\" and \"file\"");
    if (c.contains("file")) {
      s.script = segments_from_csv(base_dir / text(c, "file", path));
    } else {
      const auto& arr = c["segments"];
      const auto p = sub(path, "segments");
      if (!arr.is_array()) schema(p, "expected an array of [start, rate] pairs");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto pair = numbers(arr[i], at(p, i));
        if (pair.size() != 2) schema(at(p, i), "expected [start, rate]");
        s.script.push_back({pair[0], pair[1]});
      }
    }
  } else {
    schema(sub(path, "generator"), "unknown clock generator \"" + gen + "\"");
  }
  return s;
}

constexpr std::initializer_list<const char*> kClockKeys = {"initial_value", "generator", "rate",  "period",
                                                           "start_high",    "dwell",     "step",  "start_rate",
                                                           "seed",          "segments",  "file"};

std::vector<ClockSpec> parse_clocks(const json& c, const std::string& path, const NetworkGraph& g,
                                    const std::filesystem::path& base_dir) {
  json base = json::object();
  if (auto it = c.find("default"); it != c.end()) {
    only_keys(*it, sub(path, "default"), kClockKeys);
    base = *it;
  }
  const auto n = g.node_count();
  std::vector<json> per_node(n, base);
  std::vector<std::string> where(n, sub(path, "default"));
  if (auto it = c.find("nodes"); it != c.end()) {
    const auto npath = sub(path, "nodes");
    if (!it->is_array()) schema(npath, "expected an array");
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& o = (*it)[i];
      const auto p = at(npath, i);
      if (!o.is_object()) schema(p, "expected an object");
      for (auto kv = o.begin(); kv != o.end(); ++kv) {
        if (kv.key() == "node") continue;
        const bool known = std::any_of(kClockKeys.begin(), kClockKeys.end(), [&](const char* k) { return kv.key() == k; });
        if (!known) schema(p, "unknown key \"" + kv.key() + "\"");
      }
      const auto v = count(o, "node", p);
      if (v >= n) throw ConfigError(p + ": node " + std::to_string(v) + " out of range (graph has " + std::to_string(n) + ")");
      if (!seen.insert(v).second) schema(p, "node " + std::to_string(v) + " configured twice");
      json merged = base;
      // Switching generator drops the default's generator-specific keys.
      if (o.contains("generator") && o["generator"] != base.value("generator", json("constant"))) {
        json kept = json::object();
        if (base.contains("initial_value")) kept["initial_value"] = base["initial_value"];
        merged = kept;
      }
      for (auto kv = o.begin(); kv != o.end(); ++kv) {
        if (kv.key() != "node") merged[kv.key()] = kv.value();
      }
      per_node[v] = merged;
      where[v] = p;
    }
  }
  const Eigen::MatrixXi hops = n > 0 ? hop_distances(g) : Eigen::MatrixXi();
  std::vector<ClockSpec> out;
  for (NodeId v = 0; v < n; ++v) out.push_back(parse_clock(per_node[v], where[v], v, hops, base_dir));
  return out;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  const std::size_t pos = std::min(byte == 0 ? 0 : byte - 1, text.size());
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < pos; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

NetworkGraph make_line(std::size_t n, double d_max, const EdgeParams& params) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, params, 0.0});
  return NetworkGraph(n, d_max, std::move(edges));
}

NetworkGraph make_ring(std::size_t n, double d_max, const EdgeParams& params) {
  if (n < 3) throw ParameterError("ring needs at least 3 nodes");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, params, 0.0});
  return NetworkGraph(n, d_max, std::move(edges));
}

NetworkGraph make_grid(std::size_t rows, std::size_t cols, double d_max, const EdgeParams& params) {
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t id = r * cols + c;
      if (c + 1 < cols) edges.push_back({id, id + 1, params, 0.0});
      if (r + 1 < rows) edges.push_back({id, id + cols, params, 0.0});
    }
  }
  return NetworkGraph(rows * cols, d_max, std::move(edges));
}

NetworkGraph make_star(std::size_t n, double d_max, const EdgeParams& params) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.push_back({0, i, params, 0.0});
  return NetworkGraph(n, d_max, std::move(edges));
}

NetworkGraph make_random(std::size_t n, double p, std::uint64_t seed, double d_max, const EdgeParams& params) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("edge probability outside [0, 1]");
  auto rng = seeded_stream(seed, "graph/random");
  std::set<std::pair<NodeId, NodeId>> have;
  for (std::size_t i = 1; i < n; ++i) {
    const auto j = static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(i));
    have.insert({std::min(i, j), std::max(i, j)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (unit_draw(rng) < p) have.insert({i, j});
    }
  }
  std::vector<Edge> edges;
  for (const auto& [a, b] : have) edges.push_back({a, b, params, 0.0});
  return NetworkGraph(n, d_max, std::move(edges));
}

std::string canonical_hash(const nlohmann::json& doc) {
  const std::string s = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

LoadedScenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  only_keys(doc, "", {"name", "description", "graph", "clocks", "gcs", "sim"});
  for (const char* k : {"graph", "clocks", "gcs", "sim"}) {
    if (!doc.contains(k)) schema("scenario", std::string("missing section \"") + k + "\"");
  }
  LoadedScenario out;
  out.document = doc;
  out.hash = canonical_hash(doc);
  Scenario& sc = out.scenario;

  try {
    sc.graph = parse_graph(doc["graph"], "graph");
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
  sc.delay_scripts = parse_delay_scripts(doc["graph"], "graph.delay_scripts", base_dir);

  const auto& c = doc["clocks"];
  only_keys(c, "clocks", {"theta", "mu", "default", "nodes"});
  sc.params.theta = number(c, "theta", "clocks");
  sc.params.mu = number(c, "mu", "clocks");
  sc.clocks = parse_clocks(c, "clocks", sc.graph, base_dir);

  const auto& g = doc["gcs"];
  only_keys(g, "gcs", {"T", "T_stab", "p_max", "s_max", "hysteresis", "enabled"});
  sc.params.T = number(g, "T", "gcs");
  sc.params.T_stab = number(g, "T_stab", "gcs");
  sc.params.p_max = number(g, "p_max", "gcs", 0.0);
  sc.params.hysteresis = number(g, "hysteresis", "gcs", 0.0);
  sc.params.enabled = boolean(g, "enabled", "gcs", true);
  if (g.contains("s_max")) sc.s_max = count(g, "s_max", "gcs");

  const auto& s = doc["sim"];
  only_keys(s, "sim", {"horizon_cycles", "horizon_seconds", "seed", "sample_dt", "correction_semantics"});
  if (s.contains("horizon_cycles")) sc.horizon_cycles = count(s, "horizon_cycles", "sim");
  if (s.contains("horizon_seconds")) sc.horizon_seconds = number(s, "horizon_seconds", "sim");
  sc.seed = count(s, "seed", "sim", 0);
  sc.sample_dt = number(s, "sample_dt", "sim", 0.0);
  const auto sem = text(s, "correction_semantics", "sim", std::string("multiplicative"));
  if (sem == "multiplicative") {
    sc.params.semantics = CorrectionSemantics::multiplicative;
  } else if (sem == "additive") {
    sc.params.semantics = CorrectionSemantics::additive;
  } else {
    schema("sim.correction_semantics", "expected \"multiplicative\" or \"additive\"");
  }

  try {
    prepare_scenario(sc);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return out;
}

LoadedScenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what(),
                     line, col);
  }
  return scenario_from_json(doc, base_dir);
}

LoadedScenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace gcs
