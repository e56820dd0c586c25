#pragma once

#include "schedex/model.hpp"

namespace schedex {

struct RoutingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Links at or below the interference-only rate are excluded from routing.
inline constexpr double kRoutableThreshold = kInterferencePrr;

// Shortest paths to the sink set under the expected-transmission-count metric
// (edge weight 1/q). parent[t] is t's successor on a minimum-ETX path; ties
// are broken towards the smaller candidate parent id. packet_load is filled
// for sources = all transceivers. Unreachable transceivers raise
// RoutingError naming the node.
RoutingTable etx_route(const Network& net, const LinkQualityMatrix& q);

// Minimum ETX cost to a sink per node (0 for sinks); exposed for tests.
std::vector<double> etx_costs(const Network& net, const LinkQualityMatrix& q);

// k_t per node: sources whose route passes through t, inclusive of t.
// Detects cycles and sources that do not reach a sink.
std::vector<std::int64_t> subtree_packet_counts(const Network& net, const RoutingTable& table,
                                                const std::vector<NodeId>& sources);

// Hops to the sink along the routing table (0 for sinks, -1 for unrouted).
std::vector<int> hop_depths(const Network& net, const RoutingTable& table);

}  // namespace schedex
