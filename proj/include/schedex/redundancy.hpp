#pragma once

#include "schedex/model.hpp"
#include "schedex/scheduling.hpp"

namespace schedex {

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// End-to-end reliability demand. 1 is rejected: it would require infinitely
// many attempts on any lossy link.
class ReliabilityBound {
 public:
  explicit ReliabilityBound(double rho);
  double value() const { return rho_; }

 private:
  double rho_;
};

// Smallest number of attempts n with 1-(1-q)^n >= rho_i, clamped to >= 1.
// Plain ceiling on the log ratio: on exact-integer boundaries floating point
// may round up one extra attempt, which only strengthens the guarantee.
// q = 0 or rho_i = 1 are infeasible.
int required_attempts(double q, double rho_i);

// Per-packet demand rho^(1/(links*packets)) that makes the product over all
// links and packets meet rho.
double split_reliability(double rho, std::int64_t links, std::int64_t packets);

// Attempts each transceiver must schedule per packet move (tau), plus the
// live countdown state (counter).
struct RepetitionVector {
  std::vector<int> tau;      // by transceiver row, >= 1
  std::vector<int> counter;  // in (0, tau] at all times

  int max_tau() const;
  bool operator==(const RepetitionVector&) const = default;
};

// tau_t = required_attempts(q_{t,parent}, rho^(1/(|T| k_t))) from the packet
// loads in `table`; transceivers carrying no packets get tau 1. Cost is
// linear in |T|. A routed link with q = 0 is infeasible.
RepetitionVector repetition_vector(const Network& net, const LinkQualityMatrix& q,
                                   const RoutingTable& table, ReliabilityBound rho);

// Total scheduled transmissions sum_t k_t * tau_t for the given loads.
std::int64_t total_attempts(const RepetitionVector& rv, const std::vector<std::int64_t>& load,
                            const Network& net);

// One scheduled attempt of transmitter t on plain packet counts: count the
// attempt down and move a packet to the parent buffer (dropped at sinks) when
// the counter hits zero.
void update_packet_buffers(NodeId t, const Network& net, const RoutingTable& table,
                           BufferState& b, RepetitionVector& rv);

// MovePolicy adapter: a packet moves on the tau_t-th registered attempt.
class CountdownPolicy final : public MovePolicy {
 public:
  CountdownPolicy(const Network& net, RepetitionVector rv);

  bool attempt(NodeId tx) override;
  int max_attempts_per_move() const override { return rv_.max_tau(); }
  const RepetitionVector& state() const { return rv_; }

 private:
  const Network* net_;
  RepetitionVector rv_;
};

struct SchedExResult {
  ScheduleFrame frame;
  RepetitionVector repetitions;
};

// Runs the chosen scheduler under the countdown policy so that the emitted
// frame carries exactly k_t * tau_t attempts per transceiver and its analytic
// end-to-end bound meets rho. Packet loads are derived from `sources`.
SchedExResult schedex_schedule(SchedulerKind kind, const Network& net,
                               const LinkQualityMatrix& q, const RoutingTable& table,
                               ReliabilityBound rho, const std::vector<NodeId>& sources);

}  // namespace schedex
