#pragma once

#include <cstdint>
#include <string>

#include "schedex/channel.hpp"
#include "schedex/model.hpp"

namespace schedex {

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Random layout: one sink at the center of a disk, the first
// floor(n*lambda/(lambda+1)) transceivers uniform in the inner disk of radius
// inner_radius, the rest uniform in the outer annulus.
struct TopologyParams {
  int n = 50;                       // transceiver count; all are sources
  double lambda = 0.5;              // inner/outer split ratio
  double radius = 100.0;            // units
  double inner_radius = 100.0 / 1.4142135623730951;  // 100/sqrt(2)
  std::uint64_t seed = 1;

  int inner_count() const;          // floor(n*lambda/(lambda+1))
  void validate() const;
  bool operator==(const TopologyParams&) const = default;
};

struct Scenario {
  Network net;
  LinkQualityMatrix q;
  ChannelParams channel;
  TopologyParams topology;

  bool operator==(const Scenario&) const = default;
};

// Draws node positions (per node: angle first, then radius, from a
// splitmix64-seeded mt19937_64 stream) and builds the quality matrix. If some
// transceiver cannot reach the sink over transmission-range links, the layout
// is redrawn with the next derived seed; failure after the redraw budget is
// a TopologyError naming the seed. Node ids: transceivers 0..n-1, sink n at
// the center.
Scenario generate_topology(const TopologyParams& tp, const ChannelParams& cp);

// Scenario files are a single JSON document:
//   {"params": {"channel": {...}, "topology": {...}},
//    "nodes": [{"id": 0, "x": ..., "y": ..., "is_sink": false}, ...],
//    "q": [[...], ...]}   // one row per transceiver, ascending id
// Doubles round-trip exactly.
void save_scenario(const std::string& path, const Scenario& sc);
Scenario load_scenario(const std::string& path);

std::string scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const std::string& text);

}  // namespace schedex
