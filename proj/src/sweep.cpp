#include "gossipsim/sweep.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "gossipsim/io.hpp"
#include "gossipsim/rng.hpp"
#include "gossipsim/scheduler.hpp"
#include "gossipsim/types.hpp"

namespace gossipsim {

SweepSpec parse_sweep_spec(const nlohmann::ordered_json& doc) {
  if (!doc.is_object()) throw ConfigError("<grid>", "sweep grid must be a JSON object");
  SweepSpec spec;
  for (const auto& [key, value] : doc.items()) {
    if (key == "base") {
      if (!value.is_object()) throw ConfigError("base", "expected an object of configuration keys");
      spec.base = value;
    } else if (key == "grid") {
      if (!value.is_object()) throw ConfigError("grid", "expected an object mapping keys to value lists");
      for (const auto& [field, values] : value.items()) {
        if (!values.is_array() || values.empty()) throw ConfigError(field, "grid entry must be a non-empty list");
        std::vector<nlohmann::json> list;
        for (const auto& v : values) list.emplace_back(nlohmann::json::parse(v.dump()));
        spec.axes.emplace_back(field, std::move(list));
      }
    } else if (key == "master_seed") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
        throw ConfigError("master_seed", "expected a non-negative integer");
      }
      spec.master_seed = value.get<std::uint64_t>();
    } else if (key == "replicates") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 1) {
        throw ConfigError("replicates", "expected a positive integer");
      }
      spec.replicates = value.get<std::size_t>();
    } else if (key == "group_by") {
      if (!value.is_array()) throw ConfigError("group_by", "expected a list of configuration keys");
      for (const auto& v : value) {
        if (!v.is_string()) throw ConfigError("group_by", "expected configuration key names");
        spec.group_by.push_back(v.get<std::string>());
      }
    } else {
      throw ConfigError(key, "unknown sweep grid key");
    }
  }
  if (spec.group_by.empty()) {
    for (const auto& [field, values] : spec.axes) spec.group_by.push_back(field);
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<grid>", "cannot open sweep grid '" + path + "'");
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<grid>", path + ": " + e.what());
  }
  return parse_sweep_spec(doc);
}

std::vector<Condition> expand_conditions(const SweepSpec& spec) {
  const SimConfig base = config_from_json(nlohmann::json::parse(spec.base.dump()));
  std::size_t total = 1;
  for (const auto& [field, values] : spec.axes) total *= values.size();

  std::vector<Condition> out;
  out.reserve(total);
  std::vector<std::size_t> digit(spec.axes.size(), 0);
  for (std::size_t c = 0; c < total; ++c) {
    Condition cond;
    cond.index = c;
    cond.overrides = nlohmann::json::object();
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      cond.overrides[spec.axes[a].first] = spec.axes[a].second[digit[a]];
    }
    cond.key = cond.overrides.dump();  // nlohmann::json sorts keys
    cond.config = apply_overrides(base, cond.overrides);
    validate(cond.config);
    out.push_back(std::move(cond));

    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      if (++digit[a] < spec.axes[a].second.size()) break;
      digit[a] = 0;
    }
  }
  return out;
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, const std::string& condition_key, std::size_t replicate) {
  return hash_combine(hash_combine(mix64(master_seed), hash_string(condition_key)), static_cast<std::uint64_t>(replicate));
}

std::vector<RunRecord> SweepResult::records() const {
  std::vector<RunRecord> out;
  out.reserve(runs.size());
  for (const auto& r : runs) {
    if (r.record) out.push_back(*r.record);
  }
  return out;
}

RunRecord summary_only(const RunRecord& record) {
  RunRecord out;
  out.config = record.config;
  out.mean_all = record.mean_all;
  out.sd_all = record.sd_all;
  out.total_resources = record.total_resources;
  out.degenerate = record.degenerate;
  out.groups = record.groups;
  out.trustor_cooperations = record.trustor_cooperations;
  out.gossip_transmissions = record.gossip_transmissions;
  out.gossip_declines = record.gossip_declines;
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  const std::size_t replicates = options.replicates > 0 ? options.replicates : spec.replicates;
  if (replicates == 0) throw ConfigError("replicates", "must be at least 1");
  if (options.workers == 0) throw ConfigError("workers", "must be at least 1");

  SweepResult result;
  result.conditions = expand_conditions(spec);

  // File-backed inputs are loaded once and shared read-only.
  std::map<std::pair<std::string, std::string>, RunInputs> input_cache;
  std::vector<const RunInputs*> inputs;
  inputs.reserve(result.conditions.size());
  for (const auto& cond : result.conditions) {
    const auto key = std::pair{cond.config.signed_network_path.value_or(""), cond.config.triadic_table_path.value_or("")};
    auto it = input_cache.find(key);
    if (it == input_cache.end()) it = input_cache.emplace(key, resolve_inputs(cond.config)).first;
    inputs.push_back(&it->second);
  }

  const std::size_t total = result.conditions.size() * replicates;
  result.runs.resize(total);
  std::vector<char> finished(total, 0);
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::size_t emitted = 0;
  std::mutex mutex;
  std::exception_ptr visitor_error;

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      SweepRun run;
      run.condition = i / replicates;
      run.replicate = i % replicates;
      const Condition& cond = result.conditions[run.condition];
      SimConfig cfg = cond.config;
      cfg.seed = derive_run_seed(spec.master_seed, cond.key, run.replicate);
      try {
        run.record = run_simulation(cfg, *inputs[run.condition]);
      } catch (const std::exception& e) {
        run.error = e.what();
      }

      std::lock_guard lock(mutex);
      result.runs[i] = std::move(run);
      finished[i] = 1;
      ++done;
      // Hand runs to the visitor in index order; out-of-order ones wait here.
      for (; emitted < total && finished[emitted]; ++emitted) {
        SweepRun& ready = result.runs[emitted];
        if (options.on_run && !visitor_error) {
          try {
            options.on_run(result.conditions[ready.condition], ready);
          } catch (...) {
            visitor_error = std::current_exception();
          }
        }
        if (!options.retain_records) ready.record.reset();
      }
      if (options.progress) options.progress(done, total);
    }
  };

  const std::size_t n_threads = std::min(options.workers, std::max<std::size_t>(total, 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (visitor_error) std::rethrow_exception(visitor_error);

  for (const auto& r : result.runs) {
    if (!r.error.empty()) ++result.failures;
  }
  return result;
}

SweepResult run_sweep(const SweepSpec& spec, std::size_t replicates, std::size_t workers, const ProgressFn& progress) {
  if (replicates == 0) throw ConfigError("replicates", "must be at least 1");
  SweepOptions options;
  options.replicates = replicates;
  options.workers = workers;
  options.progress = progress;
  return run_sweep(spec, options);
}

namespace {

void write_failures(const std::string& path, const SweepResult& result) {
  std::string body;
  for (const auto& r : result.runs) {
    if (r.error.empty()) continue;
    nlohmann::ordered_json j;
    j["condition"] = result.conditions[r.condition].overrides;
    j["replicate"] = r.replicate;
    j["error"] = r.error;
    body += j.dump() + "\n";
  }
  atomic_write(path, body);
}

}  // namespace

void write_sweep_outputs(const std::string& out_dir, const SweepSpec& spec, const SweepResult& result) {
  const auto records = result.records();
  write_results(out_dir + "/runs.jsonl", records);
  write_aggregate(out_dir + "/aggregate.csv", aggregate(records, spec.group_by));
  if (result.failures > 0) write_failures(out_dir + "/failures.jsonl", result);
}

SweepResult run_sweep_to_directory(const SweepSpec& spec, const SweepOptions& options, const std::string& out_dir) {
  AtomicFile runs(out_dir + "/runs.jsonl");
  std::vector<RunRecord> summaries;
  SweepOptions streaming = options;
  streaming.retain_records = false;
  streaming.on_run = [&](const Condition& cond, const SweepRun& run) {
    if (run.record) {
      runs.write(to_json_line(*run.record));
      runs.write("\n");
      summaries.push_back(summary_only(*run.record));
    }
    if (options.on_run) options.on_run(cond, run);
  };
  SweepResult result = run_sweep(spec, streaming);
  runs.commit();
  write_aggregate(out_dir + "/aggregate.csv", aggregate(summaries, spec.group_by));
  if (result.failures > 0) write_failures(out_dir + "/failures.jsonl", result);
  return result;
}

}  // namespace gossipsim
