#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace schedex {

using NodeId = std::uint32_t;

// Packet reception rate assigned to directed pairs that are inside the
// interference range but outside the transmission range. Such entries count
// as audible for the collision constraints but are never routable.
inline constexpr double kInterferencePrr = 1e-5;

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(const Point& a, const Point& b);

// One network instance: dense node ids [0, size()), each node either a
// transceiver or a sink, never both.
class Network {
 public:
  Network() = default;
  Network(std::vector<Point> coords, std::vector<bool> is_sink);

  std::size_t size() const { return coords_.size(); }
  std::size_t num_transceivers() const { return transceivers_.size(); }
  bool is_sink(NodeId v) const { return sink_.at(v); }
  bool is_transceiver(NodeId v) const { return !sink_.at(v); }
  const Point& coord(NodeId v) const { return coords_.at(v); }

  // Dense index of a transceiver among transceivers (ascending id); -1 for
  // sinks. Used as the row index into LinkQualityMatrix and BufferState.
  int row(NodeId v) const { return row_.at(v); }
  NodeId transceiver_at(std::size_t row) const { return transceivers_.at(row); }

  const std::vector<NodeId>& transceivers() const { return transceivers_; }
  const std::vector<NodeId>& sinks() const { return sinks_; }

  bool operator==(const Network& o) const {
    return coords_ == o.coords_ && sink_ == o.sink_;
  }

 private:
  std::vector<Point> coords_;
  std::vector<bool> sink_;
  std::vector<int> row_;
  std::vector<NodeId> transceivers_;
  std::vector<NodeId> sinks_;
};

// Directed packet reception rates, |T| x |V|. Row t holds the probability
// that a single attempt from transceiver row t (ACK included) is received at
// each node. Diagonal entries q_tt are zero.
class LinkQualityMatrix {
 public:
  LinkQualityMatrix() = default;
  LinkQualityMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), q_(rows * cols, 0.0) {}

  double at(int row, NodeId p) const { return q_[static_cast<std::size_t>(row) * cols_ + p]; }
  void set(int row, NodeId p, double v) { q_[static_cast<std::size_t>(row) * cols_ + p] = v; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool operator==(const LinkQualityMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> q_;
};

// Single-parent routing. parent[v] is v's next hop towards a sink (nullopt
// for sinks and unrouted nodes). packet_load[v] = k_v, the number of source
// packets whose route passes through v each frame (inclusive of v itself).
struct RoutingTable {
  std::vector<std::optional<NodeId>> parent;
  std::vector<std::int64_t> packet_load;

  bool operator==(const RoutingTable&) const = default;
};

// Per-transceiver packet counts, indexed by transceiver row.
struct BufferState {
  std::vector<std::int64_t> count;

  bool all_empty() const;
  std::int64_t total() const;
  bool operator==(const BufferState&) const = default;
};

// One packet per listed source node, zero elsewhere.
BufferState unit_buffers(const Network& net, const std::vector<NodeId>& sources);

// Identifies the packet an attempt is dedicated to. hop is 1-based along the
// source's route (source -> parent is hop 1).
struct PacketRef {
  NodeId source = 0;
  int hop = 0;
  bool operator==(const PacketRef&) const = default;
};

struct Transmission {
  NodeId tx = 0;
  NodeId rx = 0;
  std::optional<PacketRef> packet;
  bool operator==(const Transmission&) const = default;
};

using Slot = std::vector<Transmission>;

struct ScheduleFrame {
  std::vector<Slot> slots;

  std::size_t num_transmissions() const;
  bool operator==(const ScheduleFrame&) const = default;
};

// Number of slots |F|; the objective value of a solution.
std::size_t frame_length(const ScheduleFrame& frame);

enum class Constraint {
  c1_self_parent,
  c2_multiple_parents,
  c3_missing_link,
  reachability,
  c4_tx_while_audible,
  c5_receiver_disturbed,
  structure,
};

const char* constraint_name(Constraint c);

struct Violation {
  Constraint constraint;
  std::size_t slot = 0;  // meaningful for c4/c5 only
  NodeId a = 0;
  NodeId b = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(Constraint c) const;
  std::string to_string() const;
};

// Checks c1-c3 plus reachability ("successful" routing). Dimension mismatch
// between the arguments throws std::invalid_argument instead of reporting.
ValidationReport validate_routing(const RoutingTable& table, const Network& net,
                                  const LinkQualityMatrix& q);

// Checks every slot against c4/c5 with any q > 0 counting as audible, plus
// the structural requirement that each transmission targets the routing
// parent exactly once per slot.
ValidationReport validate_schedule(const ScheduleFrame& frame, const RoutingTable& table,
                                   const Network& net, const LinkQualityMatrix& q);

// Decides, per scheduled attempt of a transmitter, whether the packet in
// service moves now. The plain policy moves on every attempt; the countdown
// policy (redundancy module) moves on the tau_t-th.
class MovePolicy {
 public:
  virtual ~MovePolicy() = default;
  virtual bool attempt(NodeId tx) = 0;
  // Upper bound on attempts per packet move; sizes the livelock guard.
  virtual int max_attempts_per_move() const { return 1; }
};

class PlainMovePolicy final : public MovePolicy {
 public:
  bool attempt(NodeId) override { return true; }
};

struct ReplayResult {
  BufferState buffers;
  std::int64_t packet_moves = 0;
};

// Deterministic replay: every scheduled attempt that serves a present packet
// is registered with the policy, and the packet moves when the policy says
// so. Attributed transmissions whose packet is not at the transmitter (a
// redundant repeat) are skipped. Returns the final buffers; the pair (F, R)
// is successful for b0 iff they are all zero.
ReplayResult replay_frame(const ScheduleFrame& frame, const Network& net,
                          const RoutingTable& table, const BufferState& b0,
                          MovePolicy& policy);

BufferState execute_frame_deterministic(const ScheduleFrame& frame, const Network& net,
                                        const RoutingTable& table, const BufferState& b0);
BufferState execute_frame_deterministic(const ScheduleFrame& frame, const Network& net,
                                        const RoutingTable& table, const BufferState& b0,
                                        MovePolicy& policy);

}  // namespace schedex
