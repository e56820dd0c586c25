#include "schedex/topology.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "schedex/rng.hpp"

namespace schedex {

int TopologyParams::inner_count() const {
  return static_cast<int>(std::floor(n * lambda / (lambda + 1.0)));
}

void TopologyParams::validate() const {
  if (n < 2) throw std::invalid_argument("topology: need at least two nodes");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("topology: lambda must lie in [0,1]");
  if (!(radius > 0.0) || !(inner_radius > 0.0) || inner_radius > radius)
    throw std::invalid_argument("topology: require 0 < inner_radius <= radius");
}

namespace {

// Transceivers must reach the sink over links inside the transmission range.
// Distance-based check so rejected layouts never pay for a quality matrix.
bool all_connected(const std::vector<Point>& coords, double tx_range) {
  const std::size_t n = coords.size();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> frontier{n - 1};  // the sink
  seen[n - 1] = true;
  std::size_t reached = 0;
  while (!frontier.empty()) {
    const std::size_t v = frontier.back();
    frontier.pop_back();
    for (std::size_t t = 0; t + 1 < n; ++t) {
      if (seen[t] || distance(coords[t], coords[v]) > tx_range) continue;
      seen[t] = true;
      ++reached;
      frontier.push_back(t);
    }
  }
  return reached == n - 1;
}

// Usable-link check against the final matrix; at sane SNR levels it agrees
// with the distance check, at extreme ones it is the binding condition.
bool all_routable(const Network& net, const LinkQualityMatrix& q) {
  std::vector<bool> seen(net.size(), false);
  std::queue<NodeId> frontier;
  for (NodeId s : net.sinks()) {
    seen[s] = true;
    frontier.push(s);
  }
  std::size_t reached = 0;
  while (!frontier.empty()) {
    NodeId v = frontier.front();
    frontier.pop();
    for (NodeId t : net.transceivers()) {
      if (seen[t] || q.at(net.row(t), v) <= kInterferencePrr) continue;
      seen[t] = true;
      ++reached;
      frontier.push(t);
    }
  }
  return reached == net.num_transceivers();
}

}  // namespace

Scenario generate_topology(const TopologyParams& tp, const ChannelParams& cp) {
  tp.validate();
  cp.validate();

  // Sparse layouts rarely connect at the transmission range (a few per mille
  // for 50 nodes), so the redraw budget is generous; rejected draws only cost
  // the coordinate sampling and a distance BFS.
  constexpr int kMaxRedraws = 200000;
  std::uint64_t seed_state = tp.seed;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Rng rng(splitmix64(seed_state));

    const int n_inner = tp.inner_count();
    std::vector<Point> coords(static_cast<std::size_t>(tp.n) + 1);
    std::vector<bool> is_sink(static_cast<std::size_t>(tp.n) + 1, false);
    for (int i = 0; i < tp.n; ++i) {
      const double angle = 2.0 * std::numbers::pi * rng.uniform();
      const double u = rng.uniform();
      const double r =
          i < n_inner ? tp.inner_radius * std::sqrt(u)
                      : std::sqrt(tp.inner_radius * tp.inner_radius +
                                  (tp.radius * tp.radius - tp.inner_radius * tp.inner_radius) * u);
      coords[i] = {r * std::cos(angle), r * std::sin(angle)};
    }
    coords[tp.n] = {0.0, 0.0};
    is_sink[tp.n] = true;

    if (!all_connected(coords, cp.tx_range)) continue;

    Scenario sc{Network(std::move(coords), std::move(is_sink)), LinkQualityMatrix{}, cp, tp};
    sc.q = build_quality_matrix(sc.net, cp);
    if (all_routable(sc.net, sc.q)) return sc;
  }
  throw TopologyError("topology: could not connect all transceivers after " +
                      std::to_string(kMaxRedraws) + " redraws (n=" + std::to_string(tp.n) +
                      ", seed=" + std::to_string(tp.seed) + ")");
}

namespace {

using nlohmann::json;

json channel_to_json(const ChannelParams& cp) {
  return json{{"a_n", cp.a_n},
              {"g_n", cp.g_n},
              {"gamma_pn", cp.gamma_pn},
              {"alpha", cp.alpha},
              {"gamma0_db", cp.gamma0_db},
              {"tx_range", cp.tx_range},
              {"interference_range", cp.interference_range}};
}

json topology_to_json(const TopologyParams& tp) {
  return json{{"n", tp.n},
              {"lambda", tp.lambda},
              {"radius", tp.radius},
              {"inner_radius", tp.inner_radius},
              {"seed", tp.seed}};
}

const json& require(const json& j, const char* field, const std::string& ctx) {
  auto it = j.find(field);
  if (it == j.end())
    throw ParseError("scenario: missing field '" + std::string(field) + "' in " + ctx);
  return *it;
}

template <typename T>
T field(const json& j, const char* name, const std::string& ctx) {
  try {
    return require(j, name, ctx).get<T>();
  } catch (const json::exception& e) {
    throw ParseError("scenario: bad field '" + std::string(name) + "' in " + ctx + ": " +
                     e.what());
  }
}

}  // namespace

std::string scenario_to_json(const Scenario& sc) {
  json nodes = json::array();
  for (NodeId v = 0; v < sc.net.size(); ++v)
    nodes.push_back(json{{"id", v},
                         {"x", sc.net.coord(v).x},
                         {"y", sc.net.coord(v).y},
                         {"is_sink", sc.net.is_sink(v)}});

  json q = json::array();
  for (std::size_t r = 0; r < sc.q.rows(); ++r) {
    json row = json::array();
    for (NodeId p = 0; p < sc.q.cols(); ++p) row.push_back(sc.q.at(static_cast<int>(r), p));
    q.push_back(std::move(row));
  }

  json doc{{"params", json{{"channel", channel_to_json(sc.channel)},
                           {"topology", topology_to_json(sc.topology)}}},
           {"nodes", std::move(nodes)},
           {"q", std::move(q)}};
  return doc.dump(1);
}

Scenario scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario: not valid JSON: ") + e.what());
  }

  const json& params = require(doc, "params", "document");
  const json& ch = require(params, "channel", "params");
  const json& tp = require(params, "topology", "params");

  Scenario sc;
  sc.channel.a_n = field<double>(ch, "a_n", "channel");
  sc.channel.g_n = field<double>(ch, "g_n", "channel");
  sc.channel.gamma_pn = field<double>(ch, "gamma_pn", "channel");
  sc.channel.alpha = field<double>(ch, "alpha", "channel");
  sc.channel.gamma0_db = field<double>(ch, "gamma0_db", "channel");
  sc.channel.tx_range = field<double>(ch, "tx_range", "channel");
  sc.channel.interference_range = field<double>(ch, "interference_range", "channel");

  sc.topology.n = field<int>(tp, "n", "topology");
  sc.topology.lambda = field<double>(tp, "lambda", "topology");
  sc.topology.radius = field<double>(tp, "radius", "topology");
  sc.topology.inner_radius = field<double>(tp, "inner_radius", "topology");
  sc.topology.seed = field<std::uint64_t>(tp, "seed", "topology");

  const json& nodes = require(doc, "nodes", "document");
  if (!nodes.is_array() || nodes.empty())
    throw ParseError("scenario: 'nodes' must be a non-empty array");
  std::vector<Point> coords(nodes.size());
  std::vector<bool> sinks(nodes.size(), false);
  std::vector<bool> present(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string ctx = "nodes[" + std::to_string(i) + "]";
    const NodeId id = field<NodeId>(nodes[i], "id", ctx);
    if (id >= nodes.size() || present[id])
      throw ParseError("scenario: node ids must be dense and unique (" + ctx + ")");
    present[id] = true;
    coords[id] = {field<double>(nodes[i], "x", ctx), field<double>(nodes[i], "y", ctx)};
    sinks[id] = field<bool>(nodes[i], "is_sink", ctx);
  }
  sc.net = Network(std::move(coords), std::move(sinks));
  if (sc.net.sinks().empty()) throw ParseError("scenario: no sink node");

  const json& q = require(doc, "q", "document");
  if (!q.is_array() || q.size() != sc.net.num_transceivers())
    throw ParseError("scenario: 'q' must have one row per transceiver");
  sc.q = LinkQualityMatrix(sc.net.num_transceivers(), sc.net.size());
  for (std::size_t r = 0; r < q.size(); ++r) {
    if (!q[r].is_array() || q[r].size() != sc.net.size())
      throw ParseError("scenario: q[" + std::to_string(r) + "] must have one entry per node");
    for (NodeId p = 0; p < sc.net.size(); ++p) {
      double v;
      try {
        v = q[r][p].get<double>();
      } catch (const json::exception& e) {
        throw ParseError("scenario: q[" + std::to_string(r) + "][" + std::to_string(p) +
                         "] is not a number: " + e.what());
      }
      if (!(v >= 0.0 && v <= 1.0))
        throw ParseError("scenario: q[" + std::to_string(r) + "][" + std::to_string(p) +
                         "] outside [0,1]");
      sc.q.set(static_cast<int>(r), p, v);
    }
  }
  return sc;
}

void save_scenario(const std::string& path, const Scenario& sc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("scenario: cannot write " + path);
  out << scenario_to_json(sc) << "\n";
  if (!out) throw std::runtime_error("scenario: write failed for " + path);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("scenario: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

}  // namespace schedex
