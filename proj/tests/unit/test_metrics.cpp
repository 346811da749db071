#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gossipsim/metrics.hpp"
#include "gossipsim/rng.hpp"
#include "helpers.hpp"

using namespace gossipsim;
using testing_helpers::make_population;

namespace {

RunRecord record_of(const std::string& types, const std::vector<double>& resources, SimConfig cfg = {}) {
  auto pop = make_population(types);
  for (std::size_t i = 0; i < resources.size(); ++i) pop.agents[i].resources = resources[i];
  cfg.n_agents = types.size();
  return summarize(pop, cfg);
}

std::string csv(const AggregateResult& r) {
  std::ostringstream out;
  write_aggregate_csv(out, r);
  return out.str();
}

}  // namespace

TEST_CASE("summarize hand example") {
  const auto rec = record_of("CCDD", {22, 24, 30, 30});
  REQUIRE(rec.groups);
  CHECK(rec.groups->mean_c == 23.0);
  CHECK(rec.groups->mean_d == 30.0);
  CHECK(rec.groups->absolute_difference == 7.0);
  CHECK_FALSE(rec.groups->c_win);
  CHECK(rec.mean_all == 26.5);
  CHECK(rec.total_resources == 106.0);
  // Population SD of {22,24,30,30}.
  CHECK(rec.sd_all == doctest::Approx(std::sqrt((20.25 + 6.25 + 12.25 + 12.25) / 4)));
  CHECK(rec.groups->relative_difference * rec.sd_all == doctest::Approx(-7.0));
  CHECK_FALSE(rec.degenerate);
}

TEST_CASE("degenerate and single-type runs") {
  const auto frozen = record_of("CCDD", {20, 20, 20, 20});
  CHECK(frozen.degenerate);
  CHECK(frozen.sd_all == 0.0);
  REQUIRE(frozen.groups);
  CHECK(frozen.groups->relative_difference == 0.0);
  CHECK_FALSE(frozen.groups->c_win);

  const auto allc = record_of("CCC", {10, 20, 30});
  CHECK_FALSE(allc.groups.has_value());
  CHECK(allc.total_resources == 60.0);
  const auto j = to_json(allc);
  CHECK(j["relative_difference"].is_null());
  CHECK(j["c_win"].is_null());
}

TEST_CASE("relative difference invariants") {
  RngStream rng(1, "values");
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + rng.uniform_index(30);
    std::string types(n, 'C');
    types[0] = 'D';
    for (std::size_t i = 1; i < n; ++i) types[i] = rng.bernoulli(0.3) ? 'D' : 'C';
    types[n - 1] = 'C';
    std::vector<double> res(n);
    for (auto& r : res) r = rng.uniform01() * 100;
    const auto base = record_of(types, res);
    REQUIRE(base.groups);
    CHECK(base.groups->relative_difference * base.sd_all ==
          doctest::Approx(base.groups->mean_c - base.groups->mean_d).epsilon(1e-9));
    CHECK(base.groups->c_win == (base.groups->relative_difference > 0));

    const double shift = rng.uniform01() * 50, scale = 0.1 + rng.uniform01() * 10;
    auto shifted = res, scaled = res;
    for (auto& r : shifted) r += shift;
    for (auto& r : scaled) r *= scale;
    CHECK(record_of(types, shifted).groups->relative_difference ==
          doctest::Approx(base.groups->relative_difference).epsilon(1e-9));
    CHECK(record_of(types, scaled).groups->relative_difference ==
          doctest::Approx(base.groups->relative_difference).epsilon(1e-9));
  }
}

TEST_CASE("aggregate win rate and grouping") {
  std::vector<RunRecord> recs;
  for (int i = 0; i < 100; ++i) {
    SimConfig cfg;
    cfg.gossip_mechanism = i % 2 ? GossipMechanism::Parallel : GossipMechanism::Triadic;
    recs.push_back(record_of("CD", i < 43 ? std::vector<double>{30, 10} : std::vector<double>{10, 30}, cfg));
  }
  const auto all = aggregate(recs, {});
  REQUIRE(all.rows.size() == 1);
  CHECK(all.rows[0].runs == 100);
  CHECK(all.rows[0].c_win_rate == doctest::Approx(0.43));
  CHECK(all.rows[0].mean_relative_difference == doctest::Approx((43 - 57) * 2 / 100.0));

  const auto by_mech = aggregate(recs, {"gossip_mechanism"});
  REQUIRE(by_mech.rows.size() == 2);
  CHECK(by_mech.rows[0].key == std::vector<std::string>{"parallel"});
  CHECK(by_mech.rows[1].key == std::vector<std::string>{"triadic"});
  CHECK(by_mech.rows[0].runs == 50);
  CHECK(by_mech.rows[0].c_win_rate == doctest::Approx(21.0 / 50));

  CHECK_THROWS_AS(aggregate(recs, {"no_such_field"}), ConfigError);
}

TEST_CASE("aggregate is permutation invariant") {
  RngStream rng(2, "values");
  std::vector<RunRecord> recs;
  for (int i = 0; i < 300; ++i) {
    SimConfig cfg;
    cfg.cooperation_threshold = (static_cast<int>(rng.uniform_index(3)) - 1) * 0.2;
    recs.push_back(record_of("CCD", {rng.uniform01() * 40, rng.uniform01() * 40, rng.uniform01() * 40}, cfg));
  }
  const std::string reference = csv(aggregate(recs, {"cooperation_threshold"}));
  for (int k = 0; k < 10; ++k) {
    rng.shuffle(std::span<RunRecord>(recs));
    CHECK(csv(aggregate(recs, {"cooperation_threshold"})) == reference);
  }
}

TEST_CASE("aggregate edge cases") {
  const auto empty = aggregate({}, {"gossip_mechanism"});
  CHECK(empty.rows.empty());
  CHECK(csv(empty) ==
        "gossip_mechanism,runs,comparable_runs,degenerate_runs,c_win_rate,mean_relative_difference,"
        "sd_relative_difference,mean_total_resources,mean_absolute_difference,n_agents_min,n_agents_max\n");

  std::vector<RunRecord> mixed{record_of("CD", {1, 2}), record_of("CDC", {1, 2, 3}), record_of("CC", {5, 5})};
  const auto r = aggregate(mixed, {"gossip_mechanism"});
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].runs == 3);
  CHECK(r.rows[0].comparable_runs == 2);
  CHECK(r.rows[0].degenerate_runs == 1);
  CHECK(r.rows[0].n_agents_min == 2);
  CHECK(r.rows[0].n_agents_max == 3);
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("run record json is stable") {
  const auto rec = record_of("CCDD", {22, 24, 30, 30});
  CHECK(to_json_line(rec) == to_json_line(rec));
  const auto j = nlohmann::json::parse(to_json_line(rec));
  CHECK(j["agent_types"] == "CCDD");
  CHECK(j["final_resources"].size() == 4);
  CHECK(j["config"]["n_agents"] == 4);
  CHECK(to_json_line(rec).find('\n') == std::string::npos);
}
