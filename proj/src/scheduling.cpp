#include "schedex/scheduling.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

#include "schedex/routing.hpp"

namespace schedex {

const char* kind_name(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::node_based: return "node";
    case SchedulerKind::level_based: return "level";
    case SchedulerKind::dedicated: return "dedicated";
    case SchedulerKind::shared: return "shared";
  }
  return "?";
}

std::optional<SchedulerKind> parse_kind(std::string_view name) {
  if (name == "node" || name == "node-based") return SchedulerKind::node_based;
  if (name == "level" || name == "level-based") return SchedulerKind::level_based;
  if (name == "dedicated") return SchedulerKind::dedicated;
  if (name == "shared") return SchedulerKind::shared;
  return std::nullopt;
}

ConflictGraph ConflictGraph::build(const Network& net, const LinkQualityMatrix& q,
                                   const RoutingTable& table) {
  ConflictGraph g;
  g.n_ = net.num_transceivers();
  g.words_ = (g.n_ + 63) / 64;
  g.adj_.assign(g.n_ * g.words_, 0);

  auto add = [&g](int a, int b) {
    g.adj_[static_cast<std::size_t>(a) * g.words_ + (b >> 6)] |= 1ull << (b & 63);
    g.adj_[static_cast<std::size_t>(b) * g.words_ + (a >> 6)] |= 1ull << (a & 63);
  };

  for (std::size_t ra = 0; ra < g.n_; ++ra) {
    const NodeId a = net.transceiver_at(ra);
    for (std::size_t rb = ra + 1; rb < g.n_; ++rb) {
      const NodeId b = net.transceiver_at(rb);
      // c4: one transmitter audible at the other
      bool conflict = q.at(static_cast<int>(ra), b) > 0.0 || q.at(static_cast<int>(rb), a) > 0.0;
      // c5: one transmitter audible at the other's scheduled receiver
      if (!conflict && table.parent[a])
        conflict = q.at(static_cast<int>(rb), *table.parent[a]) > 0.0;
      if (!conflict && table.parent[b])
        conflict = q.at(static_cast<int>(ra), *table.parent[b]) > 0.0;
      if (conflict) add(static_cast<int>(ra), static_cast<int>(rb));
    }
  }
  return g;
}

bool ConflictGraph::blocked(int row, const std::vector<std::uint64_t>& slot_bits) const {
  const std::uint64_t* adj = &adj_[static_cast<std::size_t>(row) * words_];
  for (std::size_t w = 0; w < words_; ++w)
    if (adj[w] & slot_bits[w]) return true;
  return false;
}

namespace {

// Scheduler state for one transceiver. Buffered packets are kept sorted by
// source id; the packet in service stays fixed for a whole countdown so that
// its attempts form one contiguous block in the frame.
struct NodeState {
  std::vector<NodeId> packets;  // sorted ascending
  std::optional<NodeId> in_service;

  NodeId serve() {
    if (!in_service) in_service = packets.front();
    return *in_service;
  }
  void complete_move() {
    auto it = std::lower_bound(packets.begin(), packets.end(), *in_service);
    packets.erase(it);
    in_service.reset();
  }
  void arrive(NodeId source) {
    packets.insert(std::upper_bound(packets.begin(), packets.end(), source), source);
  }
};

struct RoundSlot {
  std::vector<int> rows;
  std::vector<std::uint64_t> bits;
};

}  // namespace

ScheduleFrame run_scheduler(SchedulerKind kind, const Network& net, const LinkQualityMatrix& q,
                            const RoutingTable& table, const BufferState& b0,
                            MovePolicy& policy) {
  const std::size_t n = net.num_transceivers();
  if (b0.count.size() != n) throw std::invalid_argument("scheduler: buffer size mismatch");
  for (std::int64_t c : b0.count)
    if (c < 0 || c > 1)
      throw std::invalid_argument("scheduler: initial buffers must be 0 or 1 per transceiver");

  const ConflictGraph conflicts = ConflictGraph::build(net, q, table);
  const std::vector<int> depth = hop_depths(net, table);

  // Static candidate priority per kind.
  std::vector<int> priority(n);
  for (std::size_t r = 0; r < n; ++r) priority[r] = static_cast<int>(r);
  switch (kind) {
    case SchedulerKind::node_based:
      break;  // ascending node id
    case SchedulerKind::level_based:
      std::stable_sort(priority.begin(), priority.end(), [&](int a, int b) {
        const int da = depth[net.transceiver_at(a)];
        const int db = depth[net.transceiver_at(b)];
        if (da != db) return static_cast<unsigned>(da) < static_cast<unsigned>(db);
        return a < b;
      });
      break;
    case SchedulerKind::dedicated:
    case SchedulerKind::shared:
      std::stable_sort(priority.begin(), priority.end(), [&](int a, int b) {
        const auto pa = table.parent[net.transceiver_at(a)];
        const auto pb = table.parent[net.transceiver_at(b)];
        const double qa = pa ? q.at(a, *pa) : 0.0;
        const double qb = pb ? q.at(b, *pb) : 0.0;
        if (qa != qb) return qa > qb;
        return a < b;
      });
      break;
  }

  std::vector<NodeState> state(n);
  std::int64_t buffered = 0;
  for (std::size_t r = 0; r < n; ++r)
    if (b0.count[r] == 1) {
      state[r].packets.push_back(net.transceiver_at(r));
      ++buffered;
    }

  const std::size_t words = conflicts.words();
  const bool first_fit =
      kind == SchedulerKind::node_based || kind == SchedulerKind::level_based;

  ScheduleFrame frame;
  // One attempt per buffered transceiver per round; the guard is far above
  // what any valid input needs.
  const std::int64_t max_rounds =
      10 * static_cast<std::int64_t>(std::max<std::size_t>(n, 1)) *
      std::max(1, policy.max_attempts_per_move());

  // Round-slot pool and candidate list are reused across rounds; the loop
  // runs thousands of rounds and must not allocate per round.
  std::vector<RoundSlot> round_slots(n);
  for (RoundSlot& rs : round_slots) {
    rs.rows.reserve(16);
    rs.bits.assign(words, 0);
  }
  std::vector<int> candidates;
  candidates.reserve(n);
  std::vector<int> second, still;
  second.reserve(n);
  still.reserve(n);

  auto emit_slot = [&](const std::vector<int>& rows) {
    Slot slot;
    slot.reserve(rows.size());
    for (int r : rows) {
      const NodeId t = net.transceiver_at(r);
      const NodeId parent = *table.parent[t];
      const NodeId source = state[r].serve();
      const int hop = depth[source] - depth[t] + 1;
      slot.push_back({t, parent, PacketRef{source, hop}});
    }
    frame.slots.push_back(std::move(slot));
    for (int r : rows) {
      const NodeId t = net.transceiver_at(r);
      if (!policy.attempt(t)) continue;
      const NodeId source = *state[r].in_service;
      state[r].complete_move();
      const NodeId parent = *table.parent[t];
      if (net.is_sink(parent)) {
        --buffered;
      } else {
        state[net.row(parent)].arrive(source);
      }
    }
  };

  for (std::int64_t round = 0; buffered > 0; ++round) {
    if (round >= max_rounds) {
      std::ostringstream os;
      os << "scheduler: no convergence after " << max_rounds << " rounds; buffered:";
      for (std::size_t r = 0; r < n; ++r)
        if (!state[r].packets.empty())
          os << " " << net.transceiver_at(r) << "(" << state[r].packets.size() << ")";
      throw LivelockError(os.str());
    }

    // Candidates: buffered transceivers with a parent, in kind order.
    candidates.clear();
    for (int r : priority)
      if (!state[r].packets.empty() && table.parent[net.transceiver_at(r)])
        candidates.push_back(r);
    if (candidates.empty()) {
      std::ostringstream os;
      os << "scheduler: buffered transceivers cannot transmit:";
      for (std::size_t r = 0; r < n; ++r)
        if (!state[r].packets.empty()) os << " " << net.transceiver_at(r);
      throw LivelockError(os.str());
    }

    // Slot build. Node/level: greedy coloring with first-fit placement.
    // Dedicated/shared: fill the current slot until a conflict opens a new
    // one; no back-filling.
    std::size_t used_slots = 0;
    for (int r : candidates) {
      RoundSlot* target = nullptr;
      if (first_fit) {
        for (std::size_t s = 0; s < used_slots; ++s)
          if (!conflicts.blocked(r, round_slots[s].bits)) {
            target = &round_slots[s];
            break;
          }
      } else if (used_slots > 0 && !conflicts.blocked(r, round_slots[used_slots - 1].bits)) {
        target = &round_slots[used_slots - 1];
      }
      if (!target) {
        target = &round_slots[used_slots++];
        target->rows.clear();
        std::fill(target->bits.begin(), target->bits.end(), 0);
      }
      target->rows.push_back(r);
      target->bits[r >> 6] |= 1ull << (r & 63);
    }

    for (std::size_t s = 0; s < used_slots; ++s) {
      RoundSlot& rs = round_slots[s];
      std::sort(rs.rows.begin(), rs.rows.end());
      if (kind != SchedulerKind::shared) {
        emit_slot(rs.rows);
        continue;
      }
      // Shared: a transmitter may serve packets from up to two sources, so
      // the slot is repeated and the second copy keeps the transmitters that
      // committed a second packet and still hold one.
      second.clear();
      for (int r : rs.rows)
        if (state[r].packets.size() >= 2) second.push_back(r);
      emit_slot(rs.rows);
      if (!second.empty()) {
        still.clear();
        for (int r : second)
          if (!state[r].packets.empty()) still.push_back(r);
        if (!still.empty()) emit_slot(still);
      }
    }
  }
  return frame;
}

ScheduleFrame run_scheduler(SchedulerKind kind, const Network& net, const LinkQualityMatrix& q,
                            const RoutingTable& table, const BufferState& b0) {
  PlainMovePolicy plain;
  return run_scheduler(kind, net, q, table, b0, plain);
}

}  // namespace schedex
