#include <doctest.h>

#include "helpers.hpp"
#include "schedex/model.hpp"

using namespace schedex;
using namespace schedex::test;

TEST_SUITE_BEGIN("model");

namespace {

// chain 0 -> 1 -> sink(2), q = 0.9 per hop, mutual audibility
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

ScheduleFrame two_slot_chain_frame() {
  ScheduleFrame f;
  f.slots.push_back({{0, 1, PacketRef{0, 1}}});
  f.slots.push_back({{1, 2, PacketRef{0, 2}}});
  return f;
}

}  // namespace

TEST_CASE("validate_routing accepts a well-formed chain") {
  Chain c;
  CHECK(validate_routing(c.table, c.net, c.q).ok());
}

TEST_CASE("validate_routing flags a self-parent as c1") {
  Chain c;
  c.table.parent[0] = 0;
  const auto report = validate_routing(c.table, c.net, c.q);
  CHECK(report.has(Constraint::c1_self_parent));
}

TEST_CASE("validate_routing flags a linkless parent as c3") {
  Chain c;
  c.table.parent[0] = 2;  // q(0, 2) = 0
  const auto report = validate_routing(c.table, c.net, c.q);
  CHECK(report.has(Constraint::c3_missing_link));
}

TEST_CASE("validate_routing reports unreachable transceivers") {
  Chain c;
  c.table.parent[0] = std::nullopt;
  CHECK(validate_routing(c.table, c.net, c.q).has(Constraint::reachability));
}

TEST_CASE("validate_routing rejects mismatched dimensions") {
  Chain c;
  RoutingTable bad = c.table;
  bad.parent.pop_back();
  CHECK_THROWS_AS(validate_routing(bad, c.net, c.q), std::invalid_argument);
}

TEST_CASE("validate_schedule: concurrent audible transmitters violate c4") {
  Chain c;
  ScheduleFrame f;
  f.slots.push_back({{0, 1, {}}, {1, 2, {}}});  // 1 transmits while 0 sends to it
  const auto report = validate_schedule(f, c.table, c.net, c.q);
  CHECK(report.has(Constraint::c4_tx_while_audible));
}

TEST_CASE("validate_schedule: disturbed receiver violates c5") {
  // t=0 -> relay 2, t'=1 -> sink 3; 1 is audible at 2 but 0 and 1 cannot
  // hear each other.
  Network net = line_nodes(3);
  LinkQualityMatrix q = zero_q(net);
  set_sym(q, net, 0, 2, 0.9);
  set_sym(q, net, 2, 3, 0.9);
  q.set(net.row(1), 3, 0.9);
  q.set(net.row(1), 2, 0.5);  // the disturbance
  RoutingTable table = parents(net, {2, 3, 3});
  ScheduleFrame f;
  f.slots.push_back({{0, 2, {}}, {1, 3, {}}});
  const auto report = validate_schedule(f, table, net, q);
  CHECK(report.has(Constraint::c5_receiver_disturbed));
  CHECK(!report.has(Constraint::c4_tx_while_audible));
}

TEST_CASE("validate_schedule: interference-only entries still conflict") {
  Chain c;
  c.q.set(c.net.row(1), 0, kInterferencePrr);
  c.q.set(c.net.row(0), 1, 0.9);
  ScheduleFrame f;
  f.slots.push_back({{0, 1, {}}, {1, 2, {}}});
  CHECK(validate_schedule(f, c.table, c.net, c.q).has(Constraint::c4_tx_while_audible));
}

TEST_CASE("validate_schedule: empty frame is clean") {
  Chain c;
  CHECK(validate_schedule(ScheduleFrame{}, c.table, c.net, c.q).ok());
}

TEST_CASE("validate_schedule: duplicate transmitter and wrong receiver are structural") {
  Chain c;
  ScheduleFrame f;
  f.slots.push_back({{0, 1, {}}, {0, 1, {}}});
  CHECK(validate_schedule(f, c.table, c.net, c.q).has(Constraint::structure));
  ScheduleFrame g;
  g.slots.push_back({{0, 2, {}}});  // parent of 0 is 1
  CHECK(validate_schedule(g, c.table, c.net, c.q).has(Constraint::structure));
}

TEST_CASE("frame_length counts slots") {
  CHECK(frame_length(ScheduleFrame{}) == 0);
  ScheduleFrame f;
  f.slots.resize(3);
  CHECK(frame_length(f) == 3);
}

TEST_CASE("deterministic replay: empty buffers stay empty") {
  Chain c;
  const BufferState b0 = unit_buffers(c.net, {});
  CHECK(execute_frame_deterministic(two_slot_chain_frame(), c.net, c.table, b0).all_empty());
}

TEST_CASE("deterministic replay: in-order chain frame drains") {
  Chain c;
  const BufferState b0 = unit_buffers(c.net, {0});
  CHECK(execute_frame_deterministic(two_slot_chain_frame(), c.net, c.table, b0).all_empty());
}

TEST_CASE("deterministic replay: reversed chain frame strands the packet") {
  Chain c;
  const BufferState b0 = unit_buffers(c.net, {0});
  ScheduleFrame f;
  f.slots.push_back({{1, 2, {}}});
  f.slots.push_back({{0, 1, {}}});
  const BufferState out = execute_frame_deterministic(f, c.net, c.table, b0);
  CHECK(out.count[c.net.row(0)] == 0);
  CHECK(out.count[c.net.row(1)] == 1);
}

TEST_CASE("deterministic replay is deterministic and counts packet moves") {
  Chain c;
  const BufferState b0 = unit_buffers(c.net, {0, 1});
  ScheduleFrame f;
  f.slots.push_back({{0, 1, PacketRef{0, 1}}});
  f.slots.push_back({{1, 2, PacketRef{1, 1}}});
  f.slots.push_back({{1, 2, PacketRef{0, 2}}});
  PlainMovePolicy plain;
  const ReplayResult a = replay_frame(f, c.net, c.table, b0, plain);
  const ReplayResult b = replay_frame(f, c.net, c.table, b0, plain);
  CHECK(a.buffers == b.buffers);
  CHECK(a.packet_moves == b.packet_moves);
  CHECK(a.buffers.all_empty());
  // k_0 + k_1 packet moves for the successful pair
  CHECK(a.packet_moves == c.table.packet_load[0] + c.table.packet_load[1]);
}

TEST_CASE("replay rejects a scheduled transmitter without a parent") {
  Chain c;
  c.table.parent[0] = std::nullopt;
  ScheduleFrame f;
  f.slots.push_back({{0, 1, {}}});
  const BufferState b0 = unit_buffers(c.net, {0});
  CHECK_THROWS_AS(execute_frame_deterministic(f, c.net, c.table, b0), std::invalid_argument);
}

TEST_SUITE_END();
