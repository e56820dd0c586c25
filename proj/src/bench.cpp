#include "schedex/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "schedex/rng.hpp"
#include "schedex/routing.hpp"

namespace schedex {

const char* extension_name(Extension e) {
  switch (e) {
    case Extension::none: return "none";
    case Extension::schedex: return "schedex";
    case Extension::incrementer: return "incrementer";
  }
  return "?";
}

std::optional<Extension> parse_extension(std::string_view name) {
  if (name == "none") return Extension::none;
  if (name == "schedex") return Extension::schedex;
  if (name == "incrementer") return Extension::incrementer;
  return std::nullopt;
}

void BenchConfig::validate() const {
  if (sizes.empty() || rhos.empty() || kinds.empty() || extensions.empty())
    throw std::invalid_argument("bench: sizes, rhos, kinds and extensions must be non-empty");
  if (topologies < 1) throw std::invalid_argument("bench: need at least one topology");
  if (trials < 0) throw std::invalid_argument("bench: trials must be >= 0");
  for (double rho : rhos) ReliabilityBound{rho};
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

// Countdown frame check: valid slots, replay drains all buffers, bound holds.
std::string verify_frame(const ScheduleFrame& frame, const Scenario& sc,
                         const RoutingTable& table, MovePolicy& policy,
                         const BufferState& b0) {
  const ValidationReport report = validate_schedule(frame, table, sc.net, sc.q);
  if (!report.ok())
    return "frame violates constraints: " + report.to_string();
  if (!replay_frame(frame, sc.net, table, b0, policy).buffers.all_empty())
    return "frame does not drain all buffers";
  return "";
}

struct CsvWriter {
  std::ostringstream os;

  void number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  }
  void field(const std::optional<double>& v) {
    if (v) number(*v);
  }
};

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg) {
  return run_benchmark(cfg, nullptr, nullptr);
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg, std::vector<BenchCell>* cells,
                                       std::vector<BenchTopology>* topologies) {
  cfg.validate();
  std::vector<BenchRecord> records;

  // Enumerate the per-topology work list once; reused for failure records.
  struct Cell {
    SchedulerKind kind;
    Extension ext;
    std::optional<double> rho;
  };
  std::vector<Cell> plan;
  for (SchedulerKind kind : cfg.kinds) {
    for (Extension ext : cfg.extensions) {
      if (ext == Extension::none) {
        plan.push_back({kind, ext, std::nullopt});
      } else {
        for (double rho : cfg.rhos) plan.push_back({kind, ext, rho});
      }
    }
  }

  const bool from_file = !cfg.scenario_path.empty();
  const std::vector<int> sizes = from_file ? std::vector<int>{0} : cfg.sizes;
  const int topologies_per_size = from_file ? 1 : cfg.topologies;

  for (int size : sizes) {
    for (int idx = 0; idx < topologies_per_size; ++idx) {
      const std::uint64_t topo_seed =
          mix_seed(mix_seed(cfg.master_seed, static_cast<std::uint64_t>(size)),
                   static_cast<std::uint64_t>(idx));

      Scenario sc;
      RoutingTable table;
      std::string setup_error;
      try {
        if (from_file) {
          sc = load_scenario(cfg.scenario_path);
        } else {
          TopologyParams tp;
          tp.n = size;
          tp.seed = topo_seed;
          ChannelParams cp;
          cp.gamma0_db = cfg.snr_db;
          sc = generate_topology(tp, cp);
        }
        table = etx_route(sc.net, sc.q);
      } catch (const std::exception& e) {
        setup_error = e.what();
      }

      const int record_size = from_file && setup_error.empty()
                                  ? static_cast<int>(sc.net.num_transceivers())
                                  : size;
      std::size_t topo_index = 0;
      if (setup_error.empty() && topologies) {
        topologies->push_back({sc, table});
        topo_index = topologies->size() - 1;
      }
      const std::vector<NodeId> sources = setup_error.empty()
                                              ? sc.net.transceivers()
                                              : std::vector<NodeId>{};

      for (std::size_t ci = 0; ci < plan.size(); ++ci) {
        const Cell& cell = plan[ci];
        BenchRecord rec;
        rec.size = record_size;
        rec.seed = topo_seed;
        rec.kind = cell.kind;
        rec.extension = cell.ext;
        rec.rho = cell.rho;

        if (!setup_error.empty()) {
          rec.failed = true;
          rec.fail_reason = sanitize(setup_error);
          records.push_back(std::move(rec));
          continue;
        }

        try {
          const BufferState b0 = unit_buffers(sc.net, sources);
          ScheduleFrame frame;
          std::optional<RepetitionVector> repetitions;
          std::string problem;

          const auto t0 = std::chrono::steady_clock::now();
          switch (cell.ext) {
            case Extension::none: {
              frame = run_scheduler(cell.kind, sc.net, sc.q, table, b0);
              rec.runtime_ms = elapsed_ms(t0);
              break;
            }
            case Extension::schedex: {
              SchedExResult r = schedex_schedule(cell.kind, sc.net, sc.q, table,
                                                 ReliabilityBound(*cell.rho), sources);
              rec.runtime_ms = elapsed_ms(t0);
              frame = std::move(r.frame);
              repetitions = std::move(r.repetitions);
              break;
            }
            case Extension::incrementer: {
              ScheduleFrame base = run_scheduler(cell.kind, sc.net, sc.q, table, b0);
              AttributedFrame attributed = AttributedFrame::build(base, sc.net, sc.q, table);
              AttributedFrame result =
                  increment_until(std::move(attributed), ReliabilityBound(*cell.rho));
              rec.runtime_ms = elapsed_ms(t0);
              rec.analytic_bound = result.exact_reliability();
              frame = result.frame();
              break;
            }
          }
          rec.frame_slots = static_cast<std::int64_t>(frame_length(frame));

          // Integrity: every emitted frame must be collision-free, drain the
          // buffers under its own semantics, and meet its bound.
          if (repetitions) {
            rec.analytic_bound = analytic_bound(*repetitions, sc.net, sc.q, table);
            CountdownPolicy policy(sc.net, *repetitions);
            problem = verify_frame(frame, sc, table, policy, b0);
            if (problem.empty() && !(*rec.analytic_bound >= *cell.rho))
              problem = "analytic bound below demand";
          } else {
            PlainMovePolicy plain;
            problem = verify_frame(frame, sc, table, plain, b0);
            if (problem.empty() && cell.ext == Extension::incrementer &&
                !(*rec.analytic_bound >= *cell.rho * (1.0 - 1e-12)))
              problem = "exact reliability below demand";
          }
          if (!problem.empty()) throw std::runtime_error(problem);

          if (cfg.trials > 0) {
            SimulateOptions opt;
            opt.trials = cfg.trials;
            opt.seed = mix_seed(topo_seed, 0x5150 + ci);
            rec.empirical_rate =
                simulate_frame(frame, sc.net, sc.q, table, b0, opt).rate;
          }

          if (cells)
            cells->push_back({records.size(), topo_index, std::move(frame),
                              std::move(repetitions)});
        } catch (const std::exception& e) {
          rec.failed = true;
          rec.fail_reason = sanitize(e.what());
        }
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double geomean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += std::log(x);
  return std::exp(s / static_cast<double>(xs.size()));
}

}  // namespace

Summary summarize(const std::vector<BenchRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  Summary summary;

  auto key_less = [](const BenchRecord& a, const BenchRecord& b) {
    return std::tie(a.size, a.kind, a.extension, a.rho) <
           std::tie(b.size, b.kind, b.extension, b.rho);
  };
  std::vector<BenchRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(), key_less);

  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    std::vector<double> times, slots;
    while (j < sorted.size() && !key_less(sorted[i], sorted[j])) {
      if (!sorted[j].failed) {
        times.push_back(sorted[j].runtime_ms);
        slots.push_back(static_cast<double>(sorted[j].frame_slots));
      }
      ++j;
    }
    if (times.empty()) {
      std::ostringstream os;
      os << "group size=" << sorted[i].size << " kind=" << kind_name(sorted[i].kind)
         << " ext=" << extension_name(sorted[i].extension) << " has no usable records; omitted";
      summary.warnings.push_back(os.str());
    } else {
      SummaryRow row;
      row.size = sorted[i].size;
      row.kind = sorted[i].kind;
      row.extension = sorted[i].extension;
      row.rho = sorted[i].rho;
      row.n = static_cast<int>(times.size());
      row.time_mean = mean_of(times);
      row.time_std = sample_std(times);
      row.slots_mean = mean_of(slots);
      row.slots_std = sample_std(slots);
      summary.rows.push_back(row);
    }
    i = j;
  }

  // Pairwise ratios on matched (size, seed, kind, rho).
  struct PairKey {
    int size;
    SchedulerKind kind;
    double rho;
    bool operator<(const PairKey& o) const {
      return std::tie(size, kind, rho) < std::tie(o.size, o.kind, o.rho);
    }
  };
  std::map<PairKey, std::vector<double>> speedups, size_ratios;
  for (const BenchRecord& a : records) {
    if (a.failed || a.extension != Extension::schedex || !a.rho) continue;
    for (const BenchRecord& b : records) {
      if (b.failed || b.extension != Extension::incrementer) continue;
      if (b.size != a.size || b.seed != a.seed || b.kind != a.kind || b.rho != a.rho) continue;
      PairKey key{a.size, a.kind, *a.rho};
      if (a.runtime_ms > 0.0 && b.runtime_ms > 0.0)
        speedups[key].push_back(b.runtime_ms / a.runtime_ms);
      if (b.frame_slots > 0)
        size_ratios[key].push_back(static_cast<double>(a.frame_slots) /
                                   static_cast<double>(b.frame_slots));
    }
  }
  for (const auto& [key, ratios] : size_ratios) {
    RatioRow row;
    row.size = key.size;
    row.kind = key.kind;
    row.rho = key.rho;
    row.n = static_cast<int>(ratios.size());
    row.size_ratio_mean = mean_of(ratios);
    auto it = speedups.find(key);
    if (it != speedups.end() && !it->second.empty()) {
      row.speedup_mean = mean_of(it->second);
      row.speedup_geomean = geomean(it->second);
    }
    summary.ratios.push_back(row);
  }
  return summary;
}

std::string format_summary(const Summary& summary) {
  std::ostringstream os;
  char line[256];
  os << "size kind       extension   rho        n   time_ms (mean+-std)    slots (mean+-std)\n";
  for (const SummaryRow& r : summary.rows) {
    std::snprintf(line, sizeof line, "%4d %-10s %-11s %-9s %3d   %9.2f +- %-9.2f %9.1f +- %.1f\n",
                  r.size, kind_name(r.kind), extension_name(r.extension),
                  r.rho ? std::to_string(*r.rho).substr(0, 7).c_str() : "-", r.n, r.time_mean,
                  r.time_std, r.slots_mean, r.slots_std);
    os << line;
  }
  if (!summary.ratios.empty()) {
    os << "\nper-seed schedex vs incrementer\n";
    os << "size kind       rho        n   speedup(mean) speedup(geo) size-ratio\n";
    for (const RatioRow& r : summary.ratios) {
      std::snprintf(line, sizeof line, "%4d %-10s %-9.7g %3d   %12.1f %12.1f %10.3f\n", r.size,
                    kind_name(r.kind), r.rho, r.n, r.speedup_mean, r.speedup_geomean,
                    r.size_ratio_mean);
      os << line;
    }
  }
  for (const std::string& w : summary.warnings) os << "warning: " << w << "\n";
  return os.str();
}

static const char* kCsvHeader =
    "size,seed,kind,extension,rho,frame_slots,runtime_ms,analytic_bound,empirical_rate,failed,"
    "fail_reason";

std::string records_to_csv(const std::vector<BenchRecord>& records) {
  CsvWriter w;
  w.os << kCsvHeader << "\n";
  for (const BenchRecord& r : records) {
    w.os << r.size << "," << r.seed << "," << kind_name(r.kind) << ","
         << extension_name(r.extension) << ",";
    w.field(r.rho);
    w.os << "," << r.frame_slots << ",";
    w.number(r.runtime_ms);
    w.os << ",";
    w.field(r.analytic_bound);
    w.os << ",";
    w.field(r.empirical_rate);
    w.os << "," << (r.failed ? 1 : 0) << "," << r.fail_reason << "\n";
  }
  return w.os.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& s, const char* what, std::size_t lineno) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw ParseError("csv line " + std::to_string(lineno) + ": bad " + what + " '" + s + "'");
  return v;
}

}  // namespace

std::vector<BenchRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ParseError("csv: unexpected header");
  std::vector<BenchRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 11)
      throw ParseError("csv line " + std::to_string(lineno) + ": expected 11 fields, got " +
                       std::to_string(f.size()));
    BenchRecord r;
    r.size = static_cast<int>(parse_double(f[0], "size", lineno));
    r.seed = std::strtoull(f[1].c_str(), nullptr, 10);
    const auto kind = parse_kind(f[2]);
    if (!kind) throw ParseError("csv line " + std::to_string(lineno) + ": bad kind " + f[2]);
    r.kind = *kind;
    const auto ext = parse_extension(f[3]);
    if (!ext) throw ParseError("csv line " + std::to_string(lineno) + ": bad extension " + f[3]);
    r.extension = *ext;
    if (!f[4].empty()) r.rho = parse_double(f[4], "rho", lineno);
    r.frame_slots = static_cast<std::int64_t>(parse_double(f[5], "frame_slots", lineno));
    r.runtime_ms = parse_double(f[6], "runtime_ms", lineno);
    if (!f[7].empty()) r.analytic_bound = parse_double(f[7], "analytic_bound", lineno);
    if (!f[8].empty()) r.empirical_rate = parse_double(f[8], "empirical_rate", lineno);
    r.failed = f[9] == "1";
    r.fail_reason = f[10];
    records.push_back(std::move(r));
  }
  return records;
}

std::string records_to_json(const std::vector<BenchRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const BenchRecord& r : records) {
    nlohmann::json j{{"size", r.size},
                     {"seed", r.seed},
                     {"kind", kind_name(r.kind)},
                     {"extension", extension_name(r.extension)},
                     {"frame_slots", r.frame_slots},
                     {"runtime_ms", r.runtime_ms},
                     {"failed", r.failed},
                     {"fail_reason", r.fail_reason}};
    j["rho"] = r.rho ? nlohmann::json(*r.rho) : nlohmann::json();
    j["analytic_bound"] = r.analytic_bound ? nlohmann::json(*r.analytic_bound) : nlohmann::json();
    j["empirical_rate"] = r.empirical_rate ? nlohmann::json(*r.empirical_rate) : nlohmann::json();
    arr.push_back(std::move(j));
  }
  return arr.dump(1);
}

}  // namespace schedex
