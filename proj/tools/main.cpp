// Command line front end: scenario generation and the benchmark harness.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "schedex/bench.hpp"

namespace {

int run_gen(const std::string& out, int size, std::uint64_t seed, double snr_db,
            double lambda) {
  schedex::TopologyParams tp;
  tp.n = size;
  tp.seed = seed;
  tp.lambda = lambda;
  schedex::ChannelParams cp;
  cp.gamma0_db = snr_db;
  const schedex::Scenario sc = schedex::generate_topology(tp, cp);
  schedex::save_scenario(out, sc);
  std::cout << "wrote " << out << ": " << sc.net.num_transceivers() << " transceivers, "
            << sc.net.sinks().size() << " sink(s), seed " << seed << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TDMA schedule construction with end-to-end reliability guarantees"};
  app.require_subcommand(1);

  // gen: write a scenario file
  auto* gen = app.add_subcommand("gen", "generate a random scenario and save it");
  std::string gen_out;
  int gen_size = 50;
  std::uint64_t gen_seed = 1;
  double gen_snr = 60.0;
  double gen_lambda = 0.5;
  gen->add_option("--out", gen_out, "output scenario path")->required();
  gen->add_option("--size", gen_size, "transceiver count");
  gen->add_option("--seed", gen_seed, "topology seed");
  gen->add_option("--snr-db", gen_snr, "reference SNR in dB");
  gen->add_option("--lambda", gen_lambda, "inner/outer split ratio");

  // bench: the comparison harness
  auto* bench = app.add_subcommand("bench", "run the scheduling benchmark");
  schedex::BenchConfig cfg;
  std::vector<std::string> kind_names{"node", "level", "dedicated", "shared"};
  std::vector<std::string> ext_names{"none", "schedex", "incrementer"};
  std::string format = "csv";
  std::string out_path;
  bench->add_option("--sizes", cfg.sizes, "network sizes")->capture_default_str();
  bench->add_option("--topologies", cfg.topologies, "topologies per size")
      ->capture_default_str();
  bench->add_option("--rhos", cfg.rhos, "reliability demands")->capture_default_str();
  bench->add_option("--kinds", kind_names, "scheduler kinds (node level dedicated shared)")
      ->capture_default_str();
  bench->add_option("--extensions", ext_names, "extensions (none schedex incrementer)")
      ->capture_default_str();
  bench->add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
  bench->add_option("--trials", cfg.trials,
                    "Monte-Carlo verification trials per record (0 disables)")
      ->capture_default_str();
  bench->add_option("--snr-db", cfg.snr_db, "reference SNR in dB")->capture_default_str();
  bench->add_option("--format", format, "output format: csv or json")->capture_default_str();
  bench->add_option("--out", out_path, "write records to this path");
  bench->add_option("--scenario", cfg.scenario_path, "run on a saved scenario instead");
  bench->add_flag("--timing-strict", cfg.timing_strict,
                  "pin timed cells to sequential execution");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(gen_out, gen_size, gen_seed, gen_snr, gen_lambda);

    cfg.kinds.clear();
    for (const std::string& name : kind_names) {
      const auto kind = schedex::parse_kind(name);
      if (!kind) {
        std::cerr << "unknown scheduler kind: " << name << "\n";
        return 2;
      }
      cfg.kinds.push_back(*kind);
    }
    cfg.extensions.clear();
    for (const std::string& name : ext_names) {
      const auto ext = schedex::parse_extension(name);
      if (!ext) {
        std::cerr << "unknown extension: " << name << "\n";
        return 2;
      }
      cfg.extensions.push_back(*ext);
    }
    if (format != "csv" && format != "json") {
      std::cerr << "unknown format: " << format << "\n";
      return 2;
    }

    const std::vector<schedex::BenchRecord> records = schedex::run_benchmark(cfg);
    std::cout << schedex::format_summary(schedex::summarize(records));

    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 2;
      }
      out << (format == "csv" ? schedex::records_to_csv(records)
                              : schedex::records_to_json(records));
      std::cout << "wrote " << records.size() << " records to " << out_path << "\n";
    }

    std::size_t failed = 0;
    for (const auto& r : records)
      if (r.failed) {
        ++failed;
        std::cerr << "failed: size=" << r.size << " seed=" << r.seed << " kind="
                  << schedex::kind_name(r.kind) << " ext=" << schedex::extension_name(r.extension)
                  << ": " << r.fail_reason << "\n";
      }
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
