#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gossipsim/config.hpp"
#include "gossipsim/gossip.hpp"
#include "gossipsim/io.hpp"
#include "gossipsim/scheduler.hpp"
#include "gossipsim/sweep.hpp"

namespace {

using namespace gossipsim;

constexpr int kExitConfig = 2;

struct RunOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  bool allow_degenerate = false;
  bool print_config = false;
  bool pretty = false;
  std::string snapshots;
  std::string snapshot_networks;
};

struct SweepArgs {
  std::string grid_path;
  std::optional<std::size_t> replicates;
  std::size_t workers = 0;
  std::string out_dir = "sweep_out";
  bool quiet = false;
};

struct GenNetworkOptions {
  std::size_t n = 16;
  double pos = 0.3;
  double neg = 0.1;
  std::uint64_t seed = 1;
  std::string out;
};

struct TableOptions {
  std::string path;
  std::string write_default;
};

SimConfig build_config(const RunOptions& opt) {
  SimConfig cfg = opt.config_path.empty() ? SimConfig{} : load_config(opt.config_path);
  nlohmann::json overrides = nlohmann::json::object();
  for (const auto& a : opt.overrides) {
    auto [key, value] = parse_assignment(a);
    overrides[key] = value;
  }
  cfg = apply_overrides(cfg, overrides);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.allow_degenerate) cfg.allow_degenerate = true;
  validate(cfg);
  return cfg;
}

int cmd_run(const RunOptions& opt) {
  const SimConfig cfg = build_config(opt);
  if (opt.print_config) {
    std::cout << to_json(cfg).dump(2) << '\n';
    return 0;
  }
  const RunInputs inputs = resolve_inputs(cfg);

  std::ofstream snapshot_file;
  std::unique_ptr<SnapshotWriter> writer;
  if (!opt.snapshots.empty() || !opt.snapshot_networks.empty()) {
    std::ostream* sink = &std::cerr;
    if (!opt.snapshots.empty()) {
      snapshot_file.open(opt.snapshots);
      if (!snapshot_file) throw std::runtime_error(opt.snapshots + ": cannot open for writing");
      sink = &snapshot_file;
    }
    writer = std::make_unique<SnapshotWriter>(*sink, opt.snapshot_networks);
  }
  const RunRecord rec = run_simulation(cfg, inputs, writer.get());
  std::cout << (opt.pretty ? to_json(rec).dump(2) : to_json_line(rec)) << '\n';
  return 0;
}

int cmd_sweep(const SweepArgs& opt) {
  const SweepSpec spec = load_sweep_spec(opt.grid_path);
  if (opt.replicates && *opt.replicates == 0) throw ConfigError("replicates", "expected a positive integer");
  const std::size_t replicates = opt.replicates.value_or(spec.replicates);
  const std::size_t workers = opt.workers > 0 ? opt.workers : std::max(1u, std::thread::hardware_concurrency());

  const std::size_t conditions = expand_conditions(spec).size();
  if (!opt.quiet) {
    std::cerr << "sweep: " << conditions << " conditions x " << replicates << " replicates = " << conditions * replicates
              << " runs on " << workers << " worker(s)\n";
  }
  std::size_t last_pct = 0;
  auto progress = [&](std::size_t done, std::size_t total) {
    if (opt.quiet) return;
    const std::size_t pct = done * 100 / total;
    if (pct != last_pct || done == total) {
      last_pct = pct;
      std::cerr << "\rsweep: " << done << "/" << total << " (" << pct << "%)" << std::flush;
      if (done == total) std::cerr << '\n';
    }
  };
  gossipsim::SweepOptions options;
  options.replicates = replicates;
  options.workers = workers;
  options.progress = progress;
  const SweepResult result = run_sweep_to_directory(spec, options, opt.out_dir);
  if (!opt.quiet) {
    std::cerr << "sweep: wrote " << opt.out_dir << "/runs.jsonl and " << opt.out_dir << "/aggregate.csv\n";
  }
  if (result.failures > 0) {
    std::cerr << "sweep: " << result.failures << " run(s) failed, see " << opt.out_dir << "/failures.jsonl\n";
    return 1;
  }
  return 0;
}

int cmd_gen_network(const GenNetworkOptions& opt) {
  RngStream rng(opt.seed, "gen-network");
  const SignedNetwork net = generate_signed_network(opt.n, opt.pos, opt.neg, rng);
  std::size_t positive = 0;
  for (const auto& e : net.edges()) positive += e.sign == TieSign::Positive;
  if (opt.out.empty()) {
    write_signed_network(std::cout, net);
  } else {
    save_signed_network(opt.out, net);
  }
  std::cerr << "gen-network: n=" << net.size() << " edges=" << net.edges().size() << " (+" << positive << " / -"
            << net.edges().size() - positive << ") connected=" << (is_connected(net) ? "yes" : "no") << '\n';
  return 0;
}

int cmd_validate_table(const TableOptions& opt) {
  if (!opt.write_default.empty()) {
    std::ostringstream body;
    write_triadic_table(body, TriadicTable::default_table());
    atomic_write(opt.write_default, body.str());
    std::cout << "wrote default table to " << opt.write_default << '\n';
    return 0;
  }
  const TriadicTable table = opt.path.empty() ? TriadicTable::default_table() : load_triadic_table(opt.path);
  std::size_t transmitting = 0;
  for (std::size_t i = 0; i < TriadicTable::kEntries; ++i) transmitting += table.transmits(TriadicTable::config_at(i));
  std::cout << (opt.path.empty() ? std::string("built-in default table") : opt.path) << ": " << TriadicTable::kEntries
            << "/" << TriadicTable::kEntries << " configurations covered, " << transmitting << " transmit\n";
  std::cout << "checksum " << table.checksum() << '\n';
  for (const auto& w : table.lint()) std::cout << "warning: " << w << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gossip and reputation Trust Game simulator"};
  app.require_subcommand(0, 1);

  bool show_version = false;
  bool show_formats = false;
  app.add_flag("--version", show_version, "Print build info and the default triadic table checksum");
  app.add_flag("--describe-formats", show_formats, "Describe every input and output file format");

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Execute one simulation and print its run record as JSON");
  run->add_option("--config", run_opt.config_path, "Flat JSON configuration file");
  run->add_option("--set", run_opt.overrides, "Override a configuration key (key=value), repeatable");
  run->add_option("--seed", run_opt.seed, "Random seed");
  run->add_flag("--allow-degenerate", run_opt.allow_degenerate, "Permit single-type populations");
  run->add_flag("--print-config", run_opt.print_config, "Print the effective configuration and exit");
  run->add_flag("--pretty", run_opt.pretty, "Indent the JSON output");
  run->add_option("--snapshots", run_opt.snapshots, "Write per-round snapshots (JSON lines) to this file");
  run->add_option("--snapshot-networks", run_opt.snapshot_networks, "Directory for per-round game network CSVs");

  SweepArgs sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid with replicates");
  sweep->add_option("grid", sweep_opt.grid_path, "Sweep grid JSON file")->required();
  sweep->add_option("--replicates", sweep_opt.replicates, "Replicates per condition (overrides the grid file)");
  sweep->add_option("--workers", sweep_opt.workers, "Worker threads (default: hardware concurrency)");
  sweep->add_option("--out", sweep_opt.out_dir, "Output directory");
  sweep->add_flag("--quiet", sweep_opt.quiet, "Suppress progress output");

  GenNetworkOptions gen_opt;
  auto* gen = app.add_subcommand("gen-network", "Generate a synthetic signed network");
  gen->add_option("-n", gen_opt.n, "Number of nodes")->check(CLI::Range(3, 10000));
  gen->add_option("--pos", gen_opt.pos, "Probability that a pair is a positive tie");
  gen->add_option("--neg", gen_opt.neg, "Probability that a pair is a negative tie");
  gen->add_option("--seed", gen_opt.seed, "Random seed");
  gen->add_option("-o,--out", gen_opt.out, "Output CSV (stdout when omitted)");

  TableOptions table_opt;
  auto* table = app.add_subcommand("validate-table", "Check a triadic transmission table");
  table->add_option("path", table_opt.path, "Table CSV (the built-in default when omitted)");
  table->add_option("--write-default", table_opt.write_default, "Write the built-in default table to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (show_version) {
      std::cout << "gossipsim " << GOSSIPSIM_VERSION << " (C++" << __cplusplus / 100 % 100 << ", " << __VERSION__
                << ")\ndefault triadic table checksum " << TriadicTable::default_table().checksum() << '\n';
      return 0;
    }
    if (show_formats) {
      std::cout << describe_formats();
      return 0;
    }
    if (*run) return cmd_run(run_opt);
    if (*sweep) return cmd_sweep(sweep_opt);
    if (*gen) return cmd_gen_network(gen_opt);
    if (*table) return cmd_validate_table(table_opt);
    std::cout << app.help();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
