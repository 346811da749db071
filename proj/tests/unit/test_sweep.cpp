#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gossipsim/sweep.hpp"

using namespace gossipsim;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

SweepSpec small_spec() {
  return parse_sweep_spec(ordered_json::parse(R"({
    "base": {"n_agents": 8, "total_steps": 200},
    "grid": {"gossip_mechanism": ["parallel", "triadic"], "regime": ["well_mixed", "dynamic_network"]},
    "master_seed": 5, "replicates": 3})"));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("grid spec parsing") {
  const auto spec = small_spec();
  CHECK(spec.axes.size() == 2);
  CHECK(spec.replicates == 3);
  CHECK(spec.group_by == std::vector<std::string>{"gossip_mechanism", "regime"});
  CHECK_THROWS_AS(parse_sweep_spec(ordered_json::parse(R"({"grid": {}, "replicas": 3})")), ConfigError);
  CHECK_THROWS_AS(parse_sweep_spec(ordered_json::parse(R"({"replicates": 0})")), ConfigError);
  CHECK_THROWS_AS(parse_sweep_spec(ordered_json::parse(R"({"grid": {"omega": []}})")), ConfigError);
  CHECK_THROWS_AS(load_sweep_spec("/nonexistent/grid.json"), ConfigError);
  const auto bad = parse_sweep_spec(ordered_json::parse(R"({"grid": {"omega": [0.3, 4.0]}})"));
  CHECK_THROWS_AS(expand_conditions(bad), ConfigError);
}

TEST_CASE("540-condition grid has 27000 runs at 50 replicates") {
  const auto spec = load_sweep_spec(GOSSIPSIM_CONFIG_DIR "/default_grid.json");
  const auto conds = expand_conditions(spec);
  CHECK(conds.size() == 3 * 3 * 3 * 5 * 4);
  CHECK(conds.size() * 50 == 27000);
  // Last axis varies fastest.
  CHECK(conds[0].overrides["defector_fraction"] != conds[1].overrides["defector_fraction"]);
  CHECK(conds[0].overrides["gossip_mechanism"] == conds[1].overrides["gossip_mechanism"]);
}

TEST_CASE("run seeds follow condition content, not position") {
  auto spec = small_spec();
  const auto before = expand_conditions(spec);
  spec.axes[0].second.insert(spec.axes[0].second.begin(), nlohmann::json("simple"));
  const auto after = expand_conditions(spec);
  REQUIRE(after.size() == before.size() + 2);
  const Condition& b0 = before[0];
  const Condition& a2 = after[2];
  CHECK(a2.key == b0.key);
  CHECK(derive_run_seed(5, a2.key, 1) == derive_run_seed(5, b0.key, 1));
  CHECK(derive_run_seed(5, b0.key, 1) != derive_run_seed(5, b0.key, 2));
  CHECK(derive_run_seed(5, b0.key, 1) != derive_run_seed(6, b0.key, 1));
}

TEST_CASE("sweep argument errors") {
  const auto spec = small_spec();
  CHECK_THROWS_AS(run_sweep(spec, 0, 1), ConfigError);
  CHECK_THROWS_AS(run_sweep(spec, 1, 0), ConfigError);
}

TEST_CASE("output does not depend on the worker count") {
  const auto spec = small_spec();
  const fs::path root = fs::temp_directory_path() / "gossipsim_unit_sweep";
  fs::remove_all(root);
  std::vector<std::string> runs, aggs;
  for (std::size_t workers : {1, 8}) {
    SweepOptions opt;
    opt.workers = workers;
    const auto dir = root / std::to_string(workers);
    const auto result = run_sweep_to_directory(spec, opt, dir.string());
    CHECK(result.failures == 0);
    CHECK(result.runs.size() == 12);
    runs.push_back(slurp(dir / "runs.jsonl"));
    aggs.push_back(slurp(dir / "aggregate.csv"));
    CHECK_FALSE(fs::exists(dir / "failures.jsonl"));
  }
  CHECK(runs[0] == runs[1]);
  CHECK(aggs[0] == aggs[1]);
  CHECK(std::count(runs[0].begin(), runs[0].end(), '\n') == 12);
  CHECK(std::count(aggs[0].begin(), aggs[0].end(), '\n') == 5);

  // The in-memory path writes the same bytes.
  const auto result = run_sweep(spec, 3, 4);
  write_sweep_outputs((root / "mem").string(), spec, result);
  CHECK(slurp(root / "mem" / "runs.jsonl") == runs[0]);
  CHECK(slurp(root / "mem" / "aggregate.csv") == aggs[0]);
}

TEST_CASE("visitor sees runs in order, once each") {
  const auto spec = small_spec();
  SweepOptions opt;
  opt.workers = 4;
  opt.retain_records = false;
  std::vector<std::pair<std::size_t, std::size_t>> seen;
  std::size_t progress_calls = 0;
  opt.on_run = [&](const Condition& c, const SweepRun& r) {
    CHECK(c.index == r.condition);
    CHECK(r.record.has_value());
    seen.emplace_back(r.condition, r.replicate);
  };
  opt.progress = [&](std::size_t done, std::size_t total) {
    CHECK(done <= total);
    ++progress_calls;
  };
  const auto result = run_sweep(spec, opt);
  REQUIRE(seen.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) CHECK(seen[i] == std::pair{i / 3, i % 3});
  CHECK(progress_calls == 12);
  for (const auto& r : result.runs) CHECK_FALSE(r.record.has_value());
  CHECK(result.records().empty());
}

TEST_CASE("sweep records carry derived seeds") {
  const auto spec = small_spec();
  const auto result = run_sweep(spec, 2, 2);
  for (const auto& r : result.runs) {
    REQUIRE(r.record);
    CHECK(r.record->config.seed == derive_run_seed(5, result.conditions[r.condition].key, r.replicate));
  }
  const auto slim = summary_only(*result.runs[0].record);
  CHECK(slim.rounds.empty());
  CHECK(slim.total_resources == result.runs[0].record->total_resources);
}
