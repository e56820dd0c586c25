#include "schedex/reliability.hpp"

#include <algorithm>
#include <cmath>

#include "schedex/rng.hpp"

namespace schedex {

double analytic_bound(const RepetitionVector& rv, const Network& net,
                      const LinkQualityMatrix& q, const RoutingTable& table) {
  if (table.packet_load.size() != net.size() || rv.tau.size() != net.num_transceivers())
    throw std::invalid_argument("analytic_bound: size mismatch");
  double log_sum = 0.0;
  for (NodeId t : net.transceivers()) {
    const std::int64_t k = table.packet_load[t];
    if (k == 0) continue;
    if (!table.parent[t])
      throw std::invalid_argument("analytic_bound: loaded transceiver without parent");
    const int row = net.row(t);
    const double link_q = q.at(row, *table.parent[t]);
    log_sum += static_cast<double>(k) *
               std::log1p(-std::pow(1.0 - link_q, static_cast<double>(rv.tau[row])));
  }
  return std::exp(log_sum);
}

namespace {

struct Wilson {
  double low, high;
};

Wilson wilson_99(std::int64_t successes, std::int64_t trials) {
  constexpr double z = 2.5758293035489004;  // 99.5th percentile of the normal
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

constexpr NodeId kDelivered = static_cast<NodeId>(-1);

}  // namespace

SimulationResult simulate_frame(const ScheduleFrame& frame, const Network& net,
                                const LinkQualityMatrix& q, const RoutingTable& table,
                                const BufferState& b0, const SimulateOptions& opt) {
  if (opt.trials <= 0) throw std::domain_error("simulate_frame: trials must be positive");
  if (b0.count.size() != net.num_transceivers() || table.parent.size() != net.size())
    throw std::invalid_argument("simulate_frame: buffer size mismatch");

  // Flatten: within a slot transmissions are conflict-free, so frame order =
  // flat transmission order.
  struct Step {
    NodeId tx;
    NodeId rx;
    NodeId source;  // kDelivered marks an unattributed step
    int tx_row;
    int rx_row;  // -1 for sinks
    double q;
  };
  std::vector<Step> steps;
  bool attributed = true;
  for (const Slot& slot : frame.slots) {
    for (const Transmission& tx : slot) {
      if (!net.is_transceiver(tx.tx))
        throw std::invalid_argument("simulate_frame: transmitter is not a transceiver");
      Step st;
      st.tx = tx.tx;
      st.rx = tx.rx;
      st.source = tx.packet ? tx.packet->source : kDelivered;
      if (!tx.packet) attributed = false;
      st.tx_row = net.row(tx.tx);
      st.rx_row = net.is_sink(tx.rx) ? -1 : net.row(tx.rx);
      st.q = q.at(st.tx_row, tx.rx);
      steps.push_back(st);
    }
  }

  const std::int64_t packets = b0.total();
  const bool unit = std::all_of(b0.count.begin(), b0.count.end(),
                                [](std::int64_t c) { return c <= 1; });
  if (attributed && !unit)
    throw std::invalid_argument("simulate_frame: attributed frame needs unit initial buffers");

  std::vector<NodeId> pos0(net.size(), kDelivered);
  if (unit)
    for (std::size_t r = 0; r < b0.count.size(); ++r)
      if (b0.count[r] == 1) pos0[net.transceiver_at(r)] = net.transceiver_at(r);

  std::uint64_t seed_state = opt.seed;
  Rng rng(splitmix64(seed_state));

  std::int64_t successes = 0;
  if (attributed && unit) {
    // Per-packet budgets: an attempt is usable only while its dedicated
    // packet sits at the transmitter.
    std::vector<NodeId> pos(net.size());
    for (std::int64_t trial = 0; trial < opt.trials; ++trial) {
      pos = pos0;
      std::int64_t delivered = 0;
      for (const Step& st : steps) {
        if (pos[st.source] != st.tx) continue;
        if (rng.uniform() < st.q) {
          if (st.rx_row < 0) {
            pos[st.source] = kDelivered;
            if (++delivered == packets) break;
          } else {
            pos[st.source] = st.rx;
          }
        }
      }
      if (delivered == packets) ++successes;
    }
  } else {
    // Pooled retries: a transmitter retries whatever packet waits next.
    std::vector<std::int64_t> buf(net.num_transceivers());
    for (std::int64_t trial = 0; trial < opt.trials; ++trial) {
      buf = b0.count;
      std::int64_t delivered = 0;
      for (const Step& st : steps) {
        if (buf[st.tx_row] == 0) continue;
        if (rng.uniform() < st.q) {
          buf[st.tx_row] -= 1;
          if (st.rx_row < 0) {
            if (++delivered == packets) break;
          } else {
            buf[st.rx_row] += 1;
          }
        }
      }
      if (delivered == packets) ++successes;
    }
  }

  SimulationResult res;
  res.trials = opt.trials;
  res.successes = successes;
  res.rate = static_cast<double>(successes) / static_cast<double>(opt.trials);
  const Wilson w = wilson_99(successes, opt.trials);
  res.ci_low = w.low;
  res.ci_high = w.high;
  return res;
}

}  // namespace schedex
