#pragma once

#include <optional>
#include <string>

#include "schedex/incrementer.hpp"
#include "schedex/reliability.hpp"
#include "schedex/topology.hpp"

namespace schedex {

enum class Extension { none, schedex, incrementer };

const char* extension_name(Extension e);
std::optional<Extension> parse_extension(std::string_view name);

struct BenchConfig {
  std::vector<int> sizes{50, 200};
  int topologies = 10;
  std::vector<double> rhos{0.9, 0.999, 0.99999};
  std::vector<SchedulerKind> kinds{kAllKinds[0], kAllKinds[1], kAllKinds[2], kAllKinds[3]};
  std::vector<Extension> extensions{Extension::none, Extension::schedex, Extension::incrementer};
  std::uint64_t master_seed = 1;
  std::int64_t trials = 0;  // Monte-Carlo verification per record; 0 disables
  double snr_db = 60.0;
  bool timing_strict = false;
  // Loaded scenario replaces generated topologies when set.
  std::string scenario_path;

  void validate() const;
};

struct BenchRecord {
  int size = 0;
  std::uint64_t seed = 0;
  SchedulerKind kind = SchedulerKind::node_based;
  Extension extension = Extension::none;
  std::optional<double> rho;             // absent for plain scheduling
  std::int64_t frame_slots = 0;
  double runtime_ms = 0.0;               // schedule construction only
  std::optional<double> analytic_bound;  // exact reliability for incrementer
  std::optional<double> empirical_rate;
  bool failed = false;
  std::string fail_reason;

  bool operator==(const BenchRecord&) const = default;
};

// Runs every (size, topology, kind, extension, rho) cell. Construction is
// timed in isolation; generation, routing and verification are not. Failures
// turn into failed records and the run continues. When the out-parameters
// are non-null, every constructed frame and shared topology is kept for
// downstream inspection.
struct BenchTopology {
  Scenario scenario;
  RoutingTable table;
};

struct BenchCell {
  std::size_t record;    // index into the returned record list
  std::size_t topology;  // index into the topology list
  ScheduleFrame frame;
  std::optional<RepetitionVector> repetitions;  // schedex cells only
};

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg);
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg, std::vector<BenchCell>* cells,
                                       std::vector<BenchTopology>* topologies);

struct SummaryRow {
  int size;
  SchedulerKind kind;
  Extension extension;
  std::optional<double> rho;
  int n = 0;
  double time_mean = 0.0, time_std = 0.0;
  double slots_mean = 0.0, slots_std = 0.0;
};

// Per-seed pairing of the two reliability mechanisms on identical inputs.
struct RatioRow {
  int size;
  SchedulerKind kind;
  double rho;
  int n = 0;
  double speedup_mean = 0.0;     // incrementer time / schedex time
  double speedup_geomean = 0.0;
  double size_ratio_mean = 0.0;  // schedex slots / incrementer slots
};

struct Summary {
  std::vector<SummaryRow> rows;
  std::vector<RatioRow> ratios;
  std::vector<std::string> warnings;
};

Summary summarize(const std::vector<BenchRecord>& records);
std::string format_summary(const Summary& summary);

// CSV round-trips exactly: doubles are serialized at full precision and
// commas never occur inside fields.
std::string records_to_csv(const std::vector<BenchRecord>& records);
std::vector<BenchRecord> records_from_csv(const std::string& text);
std::string records_to_json(const std::vector<BenchRecord>& records);

}  // namespace schedex
