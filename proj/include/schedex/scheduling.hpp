#pragma once

#include <optional>
#include <string_view>

#include "schedex/model.hpp"

namespace schedex {

struct LivelockError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SchedulerKind { node_based, level_based, dedicated, shared };

inline constexpr SchedulerKind kAllKinds[] = {SchedulerKind::node_based,
                                              SchedulerKind::level_based,
                                              SchedulerKind::dedicated, SchedulerKind::shared};

const char* kind_name(SchedulerKind k);
std::optional<SchedulerKind> parse_kind(std::string_view name);

// Undirected conflicts between transceivers: an edge means the pair cannot
// share a slot without violating c4 or c5 at some receiver. Interference-only
// entries count as audible.
class ConflictGraph {
 public:
  static ConflictGraph build(const Network& net, const LinkQualityMatrix& q,
                             const RoutingTable& table);

  bool conflict(int row_a, int row_b) const {
    return (adj_[static_cast<std::size_t>(row_a) * words_ + (row_b >> 6)] >>
            (row_b & 63)) & 1u;
  }
  // True if row conflicts with any member of the slot bitset.
  bool blocked(int row, const std::vector<std::uint64_t>& slot_bits) const;

  std::size_t size() const { return n_; }
  std::size_t words() const { return words_; }

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> adj_;
};

// The generic slotted loop: while buffers are nonempty, pick the next slots
// per `kind` among transceivers holding packets, append them, and register
// every scheduled attempt with `policy`, which decides when the served packet
// moves on. Every emitted transmission carries a (source, hop) attribution.
// Initial buffers must be 0/1 per transceiver. Raises LivelockError when no
// buffered transceiver can transmit or the round budget is exhausted.
ScheduleFrame run_scheduler(SchedulerKind kind, const Network& net, const LinkQualityMatrix& q,
                            const RoutingTable& table, const BufferState& b0, MovePolicy& policy);

// Plain variant: each attempt moves a packet.
ScheduleFrame run_scheduler(SchedulerKind kind, const Network& net, const LinkQualityMatrix& q,
                            const RoutingTable& table, const BufferState& b0);

}  // namespace schedex
