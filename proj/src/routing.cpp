#include "schedex/routing.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace schedex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::vector<double> etx_costs(const Network& net, const LinkQualityMatrix& q) {
  if (q.rows() != net.num_transceivers() || q.cols() != net.size())
    throw std::invalid_argument("etx: link quality matrix does not match network");

  std::vector<double> dist(net.size(), kInf);
  using Item = std::pair<double, NodeId>;  // (cost, node), min-heap
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (NodeId s : net.sinks()) {
    dist[s] = 0.0;
    heap.push({0.0, s});
  }
  std::vector<bool> done(net.size(), false);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = true;
    // relax incoming routable edges t -> v
    for (NodeId t : net.transceivers()) {
      if (done[t]) continue;
      const double qv = q.at(net.row(t), v);
      if (qv <= kRoutableThreshold) continue;
      const double cand = d + 1.0 / qv;
      if (cand < dist[t]) {
        dist[t] = cand;
        heap.push({cand, t});
      }
    }
  }
  return dist;
}

RoutingTable etx_route(const Network& net, const LinkQualityMatrix& q) {
  const std::vector<double> dist = etx_costs(net, q);

  RoutingTable table;
  table.parent.assign(net.size(), std::nullopt);
  for (NodeId t : net.transceivers()) {
    if (dist[t] == kInf)
      throw RoutingError("routing: transceiver " + std::to_string(t) + " cannot reach a sink");
    double best = kInf;
    std::optional<NodeId> parent;
    for (NodeId p = 0; p < net.size(); ++p) {
      if (p == t) continue;
      const double qv = q.at(net.row(t), p);
      if (qv <= kRoutableThreshold || dist[p] == kInf) continue;
      const double cand = dist[p] + 1.0 / qv;
      if (cand < best) {  // strict: keeps the smallest parent id on ties
        best = cand;
        parent = p;
      }
    }
    table.parent[t] = parent;
  }
  table.packet_load = subtree_packet_counts(net, table, net.transceivers());
  return table;
}

std::vector<std::int64_t> subtree_packet_counts(const Network& net, const RoutingTable& table,
                                                const std::vector<NodeId>& sources) {
  if (table.parent.size() != net.size())
    throw std::invalid_argument("loads: routing table size mismatch");

  // Post-order accumulation over the child graph, linear in |V|.
  std::vector<std::int64_t> k(net.size(), 0);
  for (NodeId s : sources) {
    if (s >= net.size() || net.is_sink(s))
      throw std::invalid_argument("loads: source " + std::to_string(s) + " is not a transceiver");
    k[s] += 1;
  }

  std::vector<int> pending(net.size(), 0);  // children not yet folded in
  for (NodeId v = 0; v < net.size(); ++v)
    if (table.parent[v]) {
      NodeId p = *table.parent[v];
      if (p >= net.size()) throw std::invalid_argument("loads: parent id out of range");
      pending[p] += 1;
    }

  std::vector<NodeId> ready;
  for (NodeId v = 0; v < net.size(); ++v)
    if (pending[v] == 0) ready.push_back(v);

  std::size_t processed = 0;
  while (!ready.empty()) {
    NodeId v = ready.back();
    ready.pop_back();
    ++processed;
    if (table.parent[v]) {
      NodeId p = *table.parent[v];
      k[p] += k[v];
      if (--pending[p] == 0) ready.push_back(p);
    }
  }
  if (processed != net.size())
    throw std::invalid_argument("loads: routing table contains a cycle");

  // Every source must drain into a sink, otherwise its packets are counted
  // into a dead end.
  for (NodeId s : sources) {
    NodeId cur = s;
    while (!net.is_sink(cur)) {
      if (!table.parent[cur])
        throw std::invalid_argument("loads: source " + std::to_string(s) +
                                    " does not reach a sink");
      cur = *table.parent[cur];
    }
  }
  for (NodeId s : net.sinks()) k[s] = 0;
  return k;
}

std::vector<int> hop_depths(const Network& net, const RoutingTable& table) {
  std::vector<int> depth(net.size(), -1);
  for (NodeId s : net.sinks()) depth[s] = 0;
  for (NodeId v = 0; v < net.size(); ++v) {
    if (depth[v] >= 0) continue;
    // walk to the first node with known depth, then unwind
    std::vector<NodeId> chain;
    NodeId cur = v;
    while (depth[cur] < 0 && table.parent[cur] &&
           chain.size() <= net.size()) {
      chain.push_back(cur);
      cur = *table.parent[cur];
    }
    if (depth[cur] < 0) continue;  // unrouted or cyclic: stays -1
    int d = depth[cur];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth[*it] = ++d;
  }
  return depth;
}

}  // namespace schedex
