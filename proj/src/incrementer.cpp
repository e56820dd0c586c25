#include "schedex/incrementer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace schedex {

namespace {

double log_success(double q, std::int64_t attempts) {
  // log(1 - (1-q)^n), exact at q = 1
  return std::log1p(-std::pow(1.0 - q, static_cast<double>(attempts)));
}

// Stop tolerance on the log scale; absorbs rounding when a target is met
// exactly, far below any real gain step.
constexpr double kLogTol = 1e-12;

}  // namespace

void AttributedFrame::refresh(Group& g) const {
  g.log_factor = log_success(g.q, g.attempts);
  g.log_factor_next = log_success(g.q, g.attempts + 1);
}

AttributedFrame AttributedFrame::build(const ScheduleFrame& frame, const Network& net,
                                       const LinkQualityMatrix& q, const RoutingTable& table) {
  AttributedFrame f;
  f.frame_ = frame;
  f.slot_groups_.resize(frame.slots.size());

  std::map<std::pair<NodeId, int>, std::uint32_t> index;
  std::vector<std::size_t> first_slot, last_slot;
  std::vector<NodeId> group_tx;

  for (std::size_t s = 0; s < frame.slots.size(); ++s) {
    for (const Transmission& tx : frame.slots[s]) {
      if (!tx.packet)
        throw std::invalid_argument("attributed frame: transmission without packet attribution");
      if (!net.is_transceiver(tx.tx))
        throw std::invalid_argument("attributed frame: transmitter is not a transceiver");
      const auto key = std::make_pair(tx.packet->source, tx.packet->hop);
      auto [it, inserted] = index.emplace(key, static_cast<std::uint32_t>(f.groups_.size()));
      if (inserted) {
        Group g;
        g.q = q.at(net.row(tx.tx), tx.rx);
        if (!(g.q > 0.0))
          throw std::invalid_argument("attributed frame: attempt over a zero-quality link");
        f.groups_.push_back(g);
        f.group_key_.push_back(key);
        group_tx.push_back(tx.tx);
        first_slot.push_back(s);
        last_slot.push_back(s);
      } else if (group_tx[it->second] != tx.tx) {
        throw std::invalid_argument("attributed frame: one packet hop spread over two links");
      }
      Group& g = f.groups_[it->second];
      g.attempts += 1;
      last_slot[it->second] = s;
      f.slot_groups_[s].push_back(it->second);
    }
  }

  // Each packet's hop blocks must cover its route in order: hop h finishes
  // before hop h+1 starts, and the final hop ends at a sink.
  std::map<NodeId, int> max_hop;
  for (const auto& [key, gi] : index) {
    auto& m = max_hop[key.first];
    m = std::max(m, key.second);
    if (key.second < 1)
      throw std::invalid_argument("attributed frame: hop index must be positive");
  }
  for (const auto& [source, hops] : max_hop) {
    for (int h = 1; h <= hops; ++h) {
      auto it = index.find({source, h});
      if (it == index.end())
        throw std::invalid_argument("attributed frame: packet " + std::to_string(source) +
                                    " is missing attempts for hop " + std::to_string(h));
      if (h > 1) {
        auto prev = index.find({source, h - 1});
        if (last_slot[prev->second] >= first_slot[it->second])
          throw std::invalid_argument("attributed frame: packet " + std::to_string(source) +
                                      " has overlapping hop blocks at hop " + std::to_string(h));
      }
    }
    // each hop's attempts must leave the matching node on the routed path,
    // and the route must terminate at a sink
    NodeId cur = source;
    for (int h = 1; h <= hops; ++h) {
      if (group_tx[index.at({source, h})] != cur)
        throw std::invalid_argument("attributed frame: packet " + std::to_string(source) +
                                    " attempts hop " + std::to_string(h) + " off its route");
      if (!table.parent[cur])
        throw std::invalid_argument("attributed frame: packet " + std::to_string(source) +
                                    " runs past the routed path");
      cur = *table.parent[cur];
    }
    if (!net.is_sink(cur))
      throw std::invalid_argument("attributed frame: packet " + std::to_string(source) +
                                  " does not reach a sink");
  }

  for (Group& g : f.groups_) f.refresh(g);
  return f;
}

double AttributedFrame::log_reliability() const {
  double sum = 0.0;
  for (const Group& g : groups_) sum += g.log_factor;
  return sum;
}

double AttributedFrame::exact_reliability() const { return std::exp(log_reliability()); }

std::size_t AttributedFrame::best_repeat() const {
  if (frame_.slots.empty())
    throw std::invalid_argument("best_repeat: empty frame");
  std::size_t best = 0;
  double best_gain = -1.0;
  for (std::size_t s = 0; s < slot_groups_.size(); ++s) {
    double gain = 0.0;
    for (std::uint32_t gi : slot_groups_[s])
      gain += groups_[gi].log_factor_next - groups_[gi].log_factor;
    if (gain > best_gain) {
      best_gain = gain;
      best = s;
    }
  }
  return best;
}

void AttributedFrame::repeat_slot(std::size_t s) {
  if (s >= frame_.slots.size()) throw std::out_of_range("repeat_slot: slot index");
  frame_.slots.insert(frame_.slots.begin() + s + 1, frame_.slots[s]);
  slot_groups_.insert(slot_groups_.begin() + s + 1, slot_groups_[s]);
  for (std::uint32_t gi : slot_groups_[s]) {
    groups_[gi].attempts += 1;
    refresh(groups_[gi]);
  }
}

std::int64_t AttributedFrame::attempts(NodeId source, int hop) const {
  for (std::size_t i = 0; i < group_key_.size(); ++i)
    if (group_key_[i] == std::make_pair(source, hop)) return groups_[i].attempts;
  return 0;
}

double exact_reliability(const AttributedFrame& f) { return f.exact_reliability(); }

std::size_t best_repeat(const AttributedFrame& f) { return f.best_repeat(); }

AttributedFrame increment_until(AttributedFrame f, ReliabilityBound rho, std::size_t max_slots) {
  const double log_target = std::log(rho.value());  // -inf for rho = 0
  while (f.log_reliability() < log_target - kLogTol) {
    if (f.num_slots() >= max_slots) {
      std::ostringstream os;
      os << "incrementer: demand " << rho.value() << " unreachable within " << max_slots
         << " slots (reliability " << f.exact_reliability() << " after " << f.num_slots()
         << " slots)";
      throw InfeasibleError(os.str());
    }
    f.repeat_slot(f.best_repeat());
  }
  return f;
}

}  // namespace schedex
