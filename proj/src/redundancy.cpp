#include "schedex/redundancy.hpp"

#include <algorithm>
#include <cmath>

#include "schedex/routing.hpp"

namespace schedex {

ReliabilityBound::ReliabilityBound(double rho) : rho_(rho) {
  if (!(rho >= 0.0) || rho > 1.0)
    throw std::invalid_argument("reliability bound must lie in [0,1)");
  if (rho == 1.0)
    throw std::invalid_argument(
        "reliability bound 1 is infeasible: lossy links would need infinite attempts");
}

int required_attempts(double q, double rho_i) {
  if (!(q > 0.0) || q > 1.0)
    throw InfeasibleError("required_attempts: link quality must lie in (0,1], got " +
                          std::to_string(q));
  if (!(rho_i >= 0.0) || rho_i >= 1.0)
    throw InfeasibleError("required_attempts: per-packet demand must lie in [0,1), got " +
                          std::to_string(rho_i));
  const double num = std::log1p(-rho_i);  // <= 0
  const double den = std::log1p(-q);      // < 0, -inf when q = 1
  double ratio = num / den;
  if (!std::isfinite(ratio)) ratio = 0.0;  // q = 1
  const double n = std::ceil(ratio);
  if (n >= 2147483647.0)
    throw InfeasibleError("required_attempts: demand needs more than 2^31 attempts");
  return std::max(1, static_cast<int>(n));
}

double split_reliability(double rho, std::int64_t links, std::int64_t packets) {
  if (!(rho >= 0.0) || rho >= 1.0)
    throw std::invalid_argument("split_reliability: rho must lie in [0,1)");
  if (links < 1 || packets < 1)
    throw std::invalid_argument("split_reliability: links and packets must be positive");
  return std::pow(rho, 1.0 / (static_cast<double>(links) * static_cast<double>(packets)));
}

int RepetitionVector::max_tau() const {
  int m = 1;
  for (int t : tau) m = std::max(m, t);
  return m;
}

RepetitionVector repetition_vector(const Network& net, const LinkQualityMatrix& q,
                                   const RoutingTable& table, ReliabilityBound rho) {
  if (table.packet_load.size() != net.size())
    throw std::invalid_argument("repetition_vector: packet loads missing");
  const std::int64_t links = static_cast<std::int64_t>(net.num_transceivers());

  RepetitionVector rv;
  rv.tau.assign(net.num_transceivers(), 1);
  for (NodeId t : net.transceivers()) {
    const int row = net.row(t);
    const std::int64_t k = table.packet_load[t];
    if (k == 0) continue;  // carries nothing; one attempt placeholder
    if (!table.parent[t])
      throw InfeasibleError("repetition_vector: loaded transceiver " + std::to_string(t) +
                            " has no parent");
    const double link_q = q.at(row, *table.parent[t]);
    if (!(link_q > 0.0))
      throw InfeasibleError("repetition_vector: routed link " + std::to_string(t) + "->" +
                            std::to_string(*table.parent[t]) + " has zero quality");
    rv.tau[row] = required_attempts(link_q, split_reliability(rho.value(), links, k));
  }
  rv.counter = rv.tau;
  return rv;
}

std::int64_t total_attempts(const RepetitionVector& rv, const std::vector<std::int64_t>& load,
                            const Network& net) {
  if (load.size() != net.size() || rv.tau.size() != net.num_transceivers())
    throw std::invalid_argument("total_attempts: size mismatch");
  std::int64_t total = 0;
  for (NodeId t : net.transceivers()) total += load[t] * rv.tau[net.row(t)];
  return total;
}

void update_packet_buffers(NodeId t, const Network& net, const RoutingTable& table,
                           BufferState& b, RepetitionVector& rv) {
  const int row = net.row(t);
  if (b.count[row] <= 0) return;
  if (--rv.counter[row] > 0) return;
  b.count[row] -= 1;
  if (!table.parent[t])
    throw std::invalid_argument("update_packet_buffers: transmitter has no parent");
  const NodeId parent = *table.parent[t];
  if (!net.is_sink(parent)) b.count[net.row(parent)] += 1;
  rv.counter[row] = rv.tau[row];
}

CountdownPolicy::CountdownPolicy(const Network& net, RepetitionVector rv)
    : net_(&net), rv_(std::move(rv)) {
  if (rv_.tau.size() != net.num_transceivers() || rv_.counter.size() != rv_.tau.size())
    throw std::invalid_argument("countdown policy: repetition vector size mismatch");
}

bool CountdownPolicy::attempt(NodeId tx) {
  const int row = net_->row(tx);
  if (--rv_.counter[row] > 0) return false;
  rv_.counter[row] = rv_.tau[row];
  return true;
}

SchedExResult schedex_schedule(SchedulerKind kind, const Network& net,
                               const LinkQualityMatrix& q, const RoutingTable& table,
                               ReliabilityBound rho, const std::vector<NodeId>& sources) {
  RoutingTable routed = table;
  routed.packet_load = subtree_packet_counts(net, table, sources);
  RepetitionVector rv = repetition_vector(net, q, routed, rho);
  CountdownPolicy policy(net, rv);
  ScheduleFrame frame = run_scheduler(kind, net, q, routed, unit_buffers(net, sources), policy);
  return {std::move(frame), std::move(rv)};
}

}  // namespace schedex
