#pragma once

#include <cstddef>

#include "schedex/model.hpp"
#include "schedex/redundancy.hpp"

namespace schedex {

// A schedule frame whose every attempt is dedicated to one (source packet,
// hop) pair, with the attempts of consecutive hops of a packet forming
// disjoint blocks in frame order. Under independent per-attempt successes the
// end-to-end reliability is then the product over pairs of 1-(1-q)^attempts.
class AttributedFrame {
 public:
  // Requires full attribution and block ordering; both hold for frames
  // emitted by run_scheduler. Throws std::invalid_argument otherwise.
  static AttributedFrame build(const ScheduleFrame& frame, const Network& net,
                               const LinkQualityMatrix& q, const RoutingTable& table);

  const ScheduleFrame& frame() const { return frame_; }
  std::size_t num_slots() const { return frame_.slots.size(); }

  double log_reliability() const;
  double exact_reliability() const;

  // Slot whose repetition yields the largest reliability gain; ties resolve
  // to the smallest index. Frame must be nonempty.
  std::size_t best_repeat() const;

  // Duplicates slot s in place at position s+1.
  void repeat_slot(std::size_t s);

  std::int64_t attempts(NodeId source, int hop) const;
  std::size_t num_packet_hops() const { return groups_.size(); }

 private:
  struct Group {
    double q = 0.0;
    std::int64_t attempts = 0;
    double log_factor = 0.0;       // log(1-(1-q)^attempts)
    double log_factor_next = 0.0;  // log(1-(1-q)^(attempts+1))
  };
  void refresh(Group& g) const;

  std::vector<Group> groups_;
  std::vector<std::vector<std::uint32_t>> slot_groups_;  // group ids per slot
  std::vector<std::pair<NodeId, int>> group_key_;
  ScheduleFrame frame_;
};

double exact_reliability(const AttributedFrame& f);
std::size_t best_repeat(const AttributedFrame& f);

// Repeats the most rewarding slot (duplicate placed adjacent to its original)
// until the exact end-to-end reliability reaches rho. Growing past max_slots
// raises InfeasibleError with the reliability reached.
AttributedFrame increment_until(AttributedFrame f, ReliabilityBound rho,
                                std::size_t max_slots = 1000000);

}  // namespace schedex
