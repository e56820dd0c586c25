#include "schedex/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace schedex {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Network::Network(std::vector<Point> coords, std::vector<bool> is_sink)
    : coords_(std::move(coords)), sink_(std::move(is_sink)) {
  if (coords_.size() != sink_.size())
    throw std::invalid_argument("network: coordinate/sink list size mismatch");
  row_.assign(coords_.size(), -1);
  for (NodeId v = 0; v < coords_.size(); ++v) {
    if (!std::isfinite(coords_[v].x) || !std::isfinite(coords_[v].y))
      throw std::invalid_argument("network: non-finite coordinate at node " + std::to_string(v));
    if (sink_[v]) {
      sinks_.push_back(v);
    } else {
      row_[v] = static_cast<int>(transceivers_.size());
      transceivers_.push_back(v);
    }
  }
}

bool BufferState::all_empty() const {
  return std::all_of(count.begin(), count.end(), [](std::int64_t c) { return c == 0; });
}

std::int64_t BufferState::total() const {
  return std::accumulate(count.begin(), count.end(), std::int64_t{0});
}

BufferState unit_buffers(const Network& net, const std::vector<NodeId>& sources) {
  BufferState b;
  b.count.assign(net.num_transceivers(), 0);
  for (NodeId s : sources) {
    if (net.is_sink(s)) throw std::invalid_argument("buffers: sink listed as source");
    b.count[net.row(s)] += 1;
  }
  return b;
}

std::size_t ScheduleFrame::num_transmissions() const {
  std::size_t n = 0;
  for (const Slot& s : slots) n += s.size();
  return n;
}

std::size_t frame_length(const ScheduleFrame& frame) { return frame.slots.size(); }

const char* constraint_name(Constraint c) {
  switch (c) {
    case Constraint::c1_self_parent: return "c1";
    case Constraint::c2_multiple_parents: return "c2";
    case Constraint::c3_missing_link: return "c3";
    case Constraint::reachability: return "reachability";
    case Constraint::c4_tx_while_audible: return "c4";
    case Constraint::c5_receiver_disturbed: return "c5";
    case Constraint::structure: return "structure";
  }
  return "?";
}

bool ValidationReport::has(Constraint c) const {
  return std::any_of(violations.begin(), violations.end(),
                     [c](const Violation& v) { return v.constraint == c; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const Violation& v : violations)
    os << constraint_name(v.constraint) << " slot=" << v.slot << " (" << v.a << "," << v.b
       << "): " << v.detail << "\n";
  return os.str();
}

namespace {

void check_dimensions(const RoutingTable& table, const Network& net,
                      const LinkQualityMatrix& q) {
  if (table.parent.size() != net.size())
    throw std::invalid_argument("routing table size does not match network");
  if (q.rows() != net.num_transceivers() || q.cols() != net.size())
    throw std::invalid_argument("link quality matrix does not match network");
}

}  // namespace

ValidationReport validate_routing(const RoutingTable& table, const Network& net,
                                  const LinkQualityMatrix& q) {
  check_dimensions(table, net, q);
  ValidationReport report;

  for (NodeId v = 0; v < net.size(); ++v) {
    if (!table.parent[v]) continue;
    NodeId p = *table.parent[v];
    if (net.is_sink(v)) {
      report.violations.push_back(
          {Constraint::structure, 0, v, p, "sink has a parent"});
      continue;
    }
    if (p == v) {
      report.violations.push_back({Constraint::c1_self_parent, 0, v, p, "node is its own parent"});
      continue;
    }
    if (p >= net.size()) {
      report.violations.push_back({Constraint::structure, 0, v, p, "parent id out of range"});
      continue;
    }
    if (q.at(net.row(v), p) <= 0.0)
      report.violations.push_back(
          {Constraint::c3_missing_link, 0, v, p, "routed pair has no link"});
  }

  // Reachability: every transceiver must reach a sink via the parent chain.
  for (NodeId t : net.transceivers()) {
    NodeId cur = t;
    bool reached = false;
    for (std::size_t steps = 0; steps <= net.size(); ++steps) {
      if (net.is_sink(cur)) {
        reached = true;
        break;
      }
      if (!table.parent[cur] || *table.parent[cur] == cur || *table.parent[cur] >= net.size())
        break;
      cur = *table.parent[cur];
    }
    if (!reached)
      report.violations.push_back(
          {Constraint::reachability, 0, t, 0, "transceiver cannot reach a sink"});
  }
  return report;
}

ValidationReport validate_schedule(const ScheduleFrame& frame, const RoutingTable& table,
                                   const Network& net, const LinkQualityMatrix& q) {
  check_dimensions(table, net, q);
  ValidationReport report;

  for (std::size_t s = 0; s < frame.slots.size(); ++s) {
    const Slot& slot = frame.slots[s];

    std::vector<NodeId> seen;
    for (const Transmission& tx : slot) {
      if (tx.tx >= net.size() || !net.is_transceiver(tx.tx)) {
        report.violations.push_back({Constraint::structure, s, tx.tx, tx.rx,
                                     "transmitter is not a transceiver"});
        continue;
      }
      if (std::find(seen.begin(), seen.end(), tx.tx) != seen.end())
        report.violations.push_back(
            {Constraint::structure, s, tx.tx, tx.rx, "transmitter scheduled twice in one slot"});
      seen.push_back(tx.tx);
      if (!table.parent[tx.tx] || *table.parent[tx.tx] != tx.rx)
        report.violations.push_back(
            {Constraint::structure, s, tx.tx, tx.rx, "receiver is not the routing parent"});
    }

    // c4: while t transmits, no other audible node may transmit.
    for (const Transmission& a : slot) {
      if (!net.is_transceiver(a.tx)) continue;
      for (const Transmission& b : slot) {
        if (a.tx == b.tx || !net.is_transceiver(b.tx)) continue;
        if (q.at(net.row(b.tx), a.tx) > 0.0)
          report.violations.push_back({Constraint::c4_tx_while_audible, s, a.tx, b.tx,
                                       "transmitter can hear a concurrent transmission"});
      }
    }

    // c5: a scheduled receiver may not hear a second concurrent transmission.
    for (const Transmission& a : slot) {
      if (!net.is_transceiver(a.tx) || a.rx >= net.size()) continue;
      if (q.at(net.row(a.tx), a.rx) <= 0.0) continue;
      for (const Transmission& b : slot) {
        if (a.tx == b.tx || !net.is_transceiver(b.tx)) continue;
        if (q.at(net.row(b.tx), a.rx) > 0.0)
          report.violations.push_back({Constraint::c5_receiver_disturbed, s, a.rx, b.tx,
                                       "receiver disturbed by concurrent transmission"});
      }
    }
  }
  return report;
}

ReplayResult replay_frame(const ScheduleFrame& frame, const Network& net,
                          const RoutingTable& table, const BufferState& b0,
                          MovePolicy& policy) {
  if (b0.count.size() != net.num_transceivers())
    throw std::invalid_argument("replay: buffer state size mismatch");

  ReplayResult res;
  res.buffers = b0;

  // Packet positions by source, available when initial buffers are 0/1.
  // Needed to honor per-packet attribution in incremented frames.
  constexpr NodeId kDelivered = static_cast<NodeId>(-1);
  const bool unit = std::all_of(b0.count.begin(), b0.count.end(),
                                [](std::int64_t c) { return c <= 1; });
  std::vector<NodeId> pos(net.size(), kDelivered);
  if (unit) {
    for (std::size_t r = 0; r < b0.count.size(); ++r)
      if (b0.count[r] == 1) pos[net.transceiver_at(r)] = net.transceiver_at(r);
  }

  for (const Slot& slot : frame.slots) {
    for (const Transmission& tx : slot) {
      if (tx.tx >= net.size() || !net.is_transceiver(tx.tx))
        throw std::invalid_argument("replay: transmitter is not a transceiver");
      if (!table.parent[tx.tx])
        throw std::invalid_argument("replay: scheduled transmitter " + std::to_string(tx.tx) +
                                    " has no parent");
      const int row = net.row(tx.tx);

      if (tx.packet) {
        if (!unit)
          throw std::invalid_argument("replay: attributed frame needs unit initial buffers");
        if (pos[tx.packet->source] != tx.tx) continue;  // redundant repeat
      } else if (res.buffers.count[row] == 0) {
        continue;
      }

      if (!policy.attempt(tx.tx)) continue;

      res.buffers.count[row] -= 1;
      res.packet_moves += 1;
      if (tx.packet) pos[tx.packet->source] = net.is_sink(tx.rx) ? kDelivered : tx.rx;
      if (!net.is_sink(tx.rx)) res.buffers.count[net.row(tx.rx)] += 1;
    }
  }
  return res;
}

BufferState execute_frame_deterministic(const ScheduleFrame& frame, const Network& net,
                                        const RoutingTable& table, const BufferState& b0) {
  PlainMovePolicy plain;
  return replay_frame(frame, net, table, b0, plain).buffers;
}

BufferState execute_frame_deterministic(const ScheduleFrame& frame, const Network& net,
                                        const RoutingTable& table, const BufferState& b0,
                                        MovePolicy& policy) {
  return replay_frame(frame, net, table, b0, policy).buffers;
}

}  // namespace schedex
