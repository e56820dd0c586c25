#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "schedex/model.hpp"
#include "schedex/routing.hpp"
#include "schedex/topology.hpp"

namespace schedex::test {

// Generated fixture at the benchmark's node density: the disk radius scales
// with sqrt(n) so that small test networks stay connectable at the default
// transmission range (radius 100 at n = 50).
inline Scenario dense_scenario(int n, std::uint64_t seed) {
  TopologyParams tp;
  tp.n = n;
  tp.seed = seed;
  tp.radius = 10.0 * std::sqrt(2.0 * n);
  tp.inner_radius = tp.radius / std::sqrt(2.0);
  return generate_topology(tp, ChannelParams{});
}

// Transceivers 0..n_tx-1 plus one sink (id n_tx), spaced on a line. Hand
// tests set q entries explicitly, so coordinates only matter for distinctness.
inline Network line_nodes(int n_tx) {
  std::vector<Point> coords;
  std::vector<bool> sinks;
  for (int i = 0; i <= n_tx; ++i) {
    coords.push_back({static_cast<double>(i), 0.0});
    sinks.push_back(i == n_tx);
  }
  return Network(std::move(coords), std::move(sinks));
}

inline LinkQualityMatrix zero_q(const Network& net) {
  return LinkQualityMatrix(net.num_transceivers(), net.size());
}

// Sets q in both directions where a transceiver row exists.
inline void set_sym(LinkQualityMatrix& q, const Network& net, NodeId a, NodeId b, double value) {
  if (net.is_transceiver(a)) q.set(net.row(a), b, value);
  if (net.is_transceiver(b)) q.set(net.row(b), a, value);
}

// Routing table from an explicit parent list (one entry per transceiver id,
// in order), with loads for sources = all transceivers.
inline RoutingTable parents(const Network& net, const std::vector<NodeId>& parent_of_tx) {
  RoutingTable t;
  t.parent.assign(net.size(), std::nullopt);
  for (std::size_t i = 0; i < parent_of_tx.size(); ++i)
    t.parent[net.transceivers()[i]] = parent_of_tx[i];
  t.packet_load = subtree_packet_counts(net, t, net.transceivers());
  return t;
}

// ---- independent oracles ----

// Smallest n with 1-(1-q)^n >= rho by direct linear search.
inline int min_attempts_oracle(double q, double rho) {
  double fail = 1.0;
  for (int n = 1; n <= 10000000; ++n) {
    fail *= 1.0 - q;
    if (1.0 - fail >= rho) return n;
  }
  return -1;
}

// Exhaustive minimum-ETX path cost from `from` to any sink over all simple
// paths (edges with q above the routable threshold).
inline double etx_cost_oracle(const Network& net, const LinkQualityMatrix& q, NodeId from) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> used(net.size(), false);
  auto dfs = [&](auto&& self, NodeId v, double cost) -> void {
    if (net.is_sink(v)) {
      best = std::min(best, cost);
      return;
    }
    if (cost >= best) return;
    used[v] = true;
    for (NodeId p = 0; p < net.size(); ++p) {
      if (used[p] || p == v) continue;
      const double qv = q.at(net.row(v), p);
      if (qv <= kRoutableThreshold) continue;
      self(self, p, cost + 1.0 / qv);
    }
    used[v] = false;
  };
  dfs(dfs, from, 0.0);
  return best;
}

// Exact success probability of an attributed frame by enumerating every
// success/failure outcome of its transmissions and replaying the packet
// movement. Exponential in the attempt count; keep frames at <= ~16 attempts.
inline double enumeration_oracle(const ScheduleFrame& frame, const Network& net,
                                 const LinkQualityMatrix& q, const BufferState& b0) {
  struct Step {
    NodeId tx, rx, source;
    double q;
    bool to_sink;
  };
  std::vector<Step> steps;
  for (const Slot& slot : frame.slots)
    for (const Transmission& tx : slot) {
      if (!tx.packet) throw std::invalid_argument("enumeration oracle: unattributed frame");
      steps.push_back({tx.tx, tx.rx, tx.packet->source, q.at(net.row(tx.tx), tx.rx),
                       net.is_sink(tx.rx)});
    }

  constexpr NodeId kDelivered = static_cast<NodeId>(-1);
  std::vector<NodeId> pos0(net.size(), kDelivered);
  std::int64_t packets = 0;
  for (std::size_t r = 0; r < b0.count.size(); ++r)
    if (b0.count[r] == 1) {
      pos0[net.transceiver_at(r)] = net.transceiver_at(r);
      ++packets;
    }

  double total = 0.0;
  auto walk = [&](auto&& self, std::size_t i, double prob, std::vector<NodeId>& pos,
                  std::int64_t delivered) -> void {
    if (delivered == packets) {
      total += prob;
      return;
    }
    if (i == steps.size()) return;
    const Step& st = steps[i];
    if (pos[st.source] != st.tx) {
      self(self, i + 1, prob, pos, delivered);
      return;
    }
    // failure branch
    self(self, i + 1, prob * (1.0 - st.q), pos, delivered);
    // success branch
    const NodeId saved = pos[st.source];
    pos[st.source] = st.to_sink ? kDelivered : st.rx;
    self(self, i + 1, prob * st.q, pos, delivered + (st.to_sink ? 1 : 0));
    pos[st.source] = saved;
  };
  std::vector<NodeId> pos = pos0;
  walk(walk, 0, 1.0, pos, 0);
  return total;
}

}  // namespace schedex::test
