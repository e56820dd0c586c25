#include <doctest.h>

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "schedex/redundancy.hpp"
#include "schedex/routing.hpp"
#include "schedex/topology.hpp"

using namespace schedex;
using namespace schedex::test;

TEST_SUITE_BEGIN("redundancy");

namespace {

// chain 0 -> 1 -> sink(2), q = 0.9 per hop; |T| = 2, k = (1, 2)
struct Chain {
  Network net = line_nodes(2);
  LinkQualityMatrix q = zero_q(net);
  RoutingTable table;

  Chain() {
    set_sym(q, net, 0, 1, 0.9);
    set_sym(q, net, 1, 2, 0.9);
    table = parents(net, {1, 2});
  }
};

std::map<NodeId, std::int64_t> tx_counts(const ScheduleFrame& f) {
  std::map<NodeId, std::int64_t> counts;
  for (const Slot& slot : f.slots)
    for (const Transmission& tx : slot) counts[tx.tx] += 1;
  return counts;
}

}  // namespace

TEST_CASE("required_attempts on the stated points") {
  CHECK(required_attempts(0.9, 0.99) == 2);
  CHECK(required_attempts(1.0, 0.999) == 1);
  CHECK(required_attempts(0.67, 0.99999) == 11);
  CHECK(required_attempts(0.67, 0.99999) == min_attempts_oracle(0.67, 0.99999));
  CHECK(required_attempts(0.5, 0.0) == 1);
}

TEST_CASE("required_attempts rejects infeasible inputs") {
  CHECK_THROWS_AS(required_attempts(0.0, 0.9), InfeasibleError);
  CHECK_THROWS_AS(required_attempts(0.9, 1.0), InfeasibleError);
}

TEST_CASE("attempt counts are tight against linear search") {
  for (int qi = 2; qi <= 19; ++qi) {
    const double q = 0.05 * qi;
    for (double rho : {0.9, 0.99, 0.999, 0.9999, 0.99999}) {
      CAPTURE(q);
      CAPTURE(rho);
      const int n = required_attempts(q, rho);
      const int oracle = min_attempts_oracle(q, rho);
      const double ratio = std::log1p(-rho) / std::log1p(-q);
      const bool boundary = std::abs(ratio - std::round(ratio)) < 1e-9;
      if (boundary)
        CHECK((n == oracle || n == oracle + 1));
      else
        CHECK(n == oracle);
      // the bound itself always holds
      CHECK(static_cast<double>(n) * std::log1p(-q) <= std::log1p(-rho) + 1e-12);
    }
  }
}

TEST_CASE("split_reliability splits demands multiplicatively") {
  CHECK(split_reliability(0.81, 1, 2) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(split_reliability(0.77, 1, 1) == 0.77);
  const double r = split_reliability(0.9, 2, 2);
  CHECK(std::pow(r, 4.0) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("reliability bound of one is rejected") {
  CHECK_THROWS_AS(ReliabilityBound{1.0}, std::invalid_argument);
  CHECK_THROWS_AS(ReliabilityBound{-0.1}, std::invalid_argument);
  CHECK(ReliabilityBound{0.0}.value() == 0.0);
}

TEST_CASE("repetition vector of the chain") {
  Chain c;
  const RepetitionVector rv = repetition_vector(c.net, c.q, c.table, ReliabilityBound{0.9});
  CHECK(rv.tau[c.net.row(0)] == 2);
  CHECK(rv.tau[c.net.row(1)] == 2);
  CHECK(rv.counter == rv.tau);
  CHECK(total_attempts(rv, c.table.packet_load, c.net) == 6);
}

TEST_CASE("perfect links and zero demand clamp to one attempt") {
  Chain c;
  set_sym(c.q, c.net, 0, 1, 1.0);
  set_sym(c.q, c.net, 1, 2, 1.0);
  const RepetitionVector one = repetition_vector(c.net, c.q, c.table, ReliabilityBound{0.999});
  CHECK(one.tau == std::vector<int>{1, 1});

  Chain d;
  const RepetitionVector zero = repetition_vector(d.net, d.q, d.table, ReliabilityBound{0.0});
  CHECK(zero.tau == std::vector<int>{1, 1});
}

TEST_CASE("zero-quality routed links are infeasible") {
  Chain c;
  c.q.set(c.net.row(0), 1, 0.0);
  CHECK_THROWS_AS(repetition_vector(c.net, c.q, c.table, ReliabilityBound{0.9}),
                  InfeasibleError);
}

TEST_CASE("buffer update follows the countdown") {
  Chain c;
  RepetitionVector rv;
  rv.tau = {3, 3};
  rv.counter = {3, 3};
  BufferState b = unit_buffers(c.net, {0});

  update_packet_buffers(0, c.net, c.table, b, rv);
  CHECK(rv.counter[0] == 2);
  CHECK(b.count[0] == 1);

  rv.counter[0] = 1;
  update_packet_buffers(0, c.net, c.table, b, rv);
  CHECK(b.count[0] == 0);
  CHECK(b.count[1] == 1);
  CHECK(rv.counter[0] == 3);

  // empty buffer: nothing happens
  BufferState before = b;
  RepetitionVector rv_before = rv;
  update_packet_buffers(0, c.net, c.table, b, rv);
  CHECK(b == before);
  CHECK(rv == rv_before);

  // moving across the last hop drops the packet at the sink
  rv.counter[1] = 1;
  update_packet_buffers(1, c.net, c.table, b, rv);
  CHECK(b.all_empty());
}

TEST_CASE("chain frame carries 2 + 4 attempts and drains") {
  Chain c;
  const SchedExResult r = schedex_schedule(SchedulerKind::node_based, c.net, c.q, c.table,
                                           ReliabilityBound{0.9}, c.net.transceivers());
  const auto counts = tx_counts(r.frame);
  CHECK(counts.at(0) == 2);
  CHECK(counts.at(1) == 4);
  CHECK(r.frame.num_transmissions() == 6);
  CHECK(validate_schedule(r.frame, c.table, c.net, c.q).ok());

  CountdownPolicy policy(c.net, r.repetitions);
  const BufferState b0 = unit_buffers(c.net, c.net.transceivers());
  CHECK(execute_frame_deterministic(r.frame, c.net, c.table, b0, policy).all_empty());
}

TEST_CASE("zero demand reduces to plain scheduling") {
  const Scenario sc = dense_scenario(15, 5);
  const RoutingTable table = etx_route(sc.net, sc.q);
  const BufferState b0 = unit_buffers(sc.net, sc.net.transceivers());
  for (SchedulerKind kind : kAllKinds) {
    const ScheduleFrame plain = run_scheduler(kind, sc.net, sc.q, table, b0);
    const SchedExResult r = schedex_schedule(kind, sc.net, sc.q, table, ReliabilityBound{0.0},
                                             sc.net.transceivers());
    CHECK(plain == r.frame);
  }
}

TEST_CASE("attempt accounting: per-node transmissions equal k_t * tau_t") {
  for (std::uint64_t seed : {2ull, 9ull}) {
    const Scenario sc = dense_scenario(20, seed);
    const RoutingTable table = etx_route(sc.net, sc.q);
    for (double rho : {0.9, 0.999}) {
      const SchedExResult r = schedex_schedule(SchedulerKind::dedicated, sc.net, sc.q, table,
                                               ReliabilityBound{rho}, sc.net.transceivers());
      auto counts = tx_counts(r.frame);
      for (NodeId t : sc.net.transceivers())
        CHECK(counts[t] ==
              table.packet_load[t] * r.repetitions.tau[sc.net.row(t)]);
      CHECK(r.frame.num_transmissions() ==
            static_cast<std::size_t>(
                total_attempts(r.repetitions, table.packet_load, sc.net)));
    }
  }
}

TEST_CASE("harder demands never shrink the repetition vector or the frame") {
  const Scenario sc = dense_scenario(20, 3);
  const RoutingTable table = etx_route(sc.net, sc.q);

  std::size_t prev_len = 0;
  std::vector<int> prev_tau;
  for (double rho : {0.0, 0.9, 0.999, 0.99999}) {
    const SchedExResult r = schedex_schedule(SchedulerKind::node_based, sc.net, sc.q, table,
                                             ReliabilityBound{rho}, sc.net.transceivers());
    if (!prev_tau.empty())
      for (std::size_t i = 0; i < prev_tau.size(); ++i)
        CHECK(r.repetitions.tau[i] >= prev_tau[i]);
    CHECK(frame_length(r.frame) >= prev_len);
    prev_tau = r.repetitions.tau;
    prev_len = frame_length(r.frame);
  }
}

TEST_SUITE_END();
