#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gossipsim/config.hpp"
#include "gossipsim/metrics.hpp"

namespace gossipsim {

struct SweepSpec {
  nlohmann::ordered_json base = nlohmann::ordered_json::object();
  // Axes in declaration order; the last axis varies fastest.
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> axes;
  std::uint64_t master_seed = 1;
  std::size_t replicates = 1;
  std::vector<std::string> group_by;  // defaults to the axis names
};

SweepSpec parse_sweep_spec(const nlohmann::ordered_json& doc);
SweepSpec load_sweep_spec(const std::string& path);

struct Condition {
  std::size_t index = 0;
  nlohmann::json overrides;  // axis values only
  std::string key;           // canonical JSON of overrides; feeds seed derivation
  SimConfig config;          // seed left at the base value
};

// Cartesian product of the axes applied over base. Invalid combinations are ConfigErrors.
std::vector<Condition> expand_conditions(const SweepSpec& spec);

// Keyed by the condition's content rather than its position, so extending a
// grid leaves the seeds of existing conditions untouched.
std::uint64_t derive_run_seed(std::uint64_t master_seed, const std::string& condition_key, std::size_t replicate);

struct SweepRun {
  std::size_t condition = 0;
  std::size_t replicate = 0;
  std::optional<RunRecord> record;
  std::string error;
};

struct SweepResult {
  std::vector<Condition> conditions;
  std::vector<SweepRun> runs;  // condition-major, replicate-minor
  std::size_t failures = 0;

  std::vector<RunRecord> records() const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;
using RunVisitor = std::function<void(const Condition&, const SweepRun&)>;

struct SweepOptions {
  std::size_t replicates = 0;  // 0 takes the grid's value
  std::size_t workers = 1;
  ProgressFn progress;
  // Called once per run in condition-major order, never concurrently.
  RunVisitor on_run;
  // When false, records are dropped after on_run and SweepResult::runs keeps only errors.
  bool retain_records = true;
};

// Runs every condition x replicate on up to `workers` threads. Output order and
// content do not depend on the worker count. A failing run is recorded and the
// sweep continues.
SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options);
SweepResult run_sweep(const SweepSpec& spec, std::size_t replicates, std::size_t workers,
                      const ProgressFn& progress = {});

// Record without per-agent and per-round detail; enough for aggregate().
RunRecord summary_only(const RunRecord& record);

// runs.jsonl, aggregate.csv and (when any run failed) failures.jsonl under out_dir.
void write_sweep_outputs(const std::string& out_dir, const SweepSpec& spec, const SweepResult& result);

// Runs the sweep streaming runs.jsonl to disk as results arrive, then writes
// aggregate.csv and failures.jsonl. Memory stays bounded for large grids.
SweepResult run_sweep_to_directory(const SweepSpec& spec, const SweepOptions& options, const std::string& out_dir);

}  // namespace gossipsim
