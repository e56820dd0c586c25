#pragma once

#include "schedex/model.hpp"
#include "schedex/redundancy.hpp"

namespace schedex {

// Guaranteed end-to-end reliability of a countdown frame: the product over
// transceivers of (1-(1-q_{t,parent})^tau_t)^{k_t}, evaluated in log space.
double analytic_bound(const RepetitionVector& rv, const Network& net,
                      const LinkQualityMatrix& q, const RoutingTable& table);

struct SimulateOptions {
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
};

struct SimulationResult {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double rate = 0.0;
  double ci_low = 0.0;   // two-sided 99% Wilson interval
  double ci_high = 0.0;

  double ci_half() const { return 0.5 * (ci_high - ci_low); }
};

// Stochastic frame replay: slots execute in order and each scheduled attempt
// succeeds independently with the link's reception rate. Attributed attempts
// serve their dedicated packet (skipped once it has moved on); unattributed
// attempts serve any waiting packet. A trial succeeds when every packet has
// reached a sink by the end of the frame.
SimulationResult simulate_frame(const ScheduleFrame& frame, const Network& net,
                                const LinkQualityMatrix& q, const RoutingTable& table,
                                const BufferState& b0, const SimulateOptions& opt);

}  // namespace schedex
