#include <doctest.h>

#include <fstream>

#include "gossipsim/config.hpp"
#include "gossipsim/types.hpp"

using namespace gossipsim;
using nlohmann::json;

namespace {

std::string failing_field(const SimConfig& c) {
  try {
    validate(c);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return {};
}

}  // namespace

TEST_CASE("defaults") {
  const SimConfig c;
  CHECK_NOTHROW(validate(c));
  CHECK(c.steps_per_round() == 100);
  CHECK(c.effective_piece_lifespan() == 10);
  CHECK(c.defector_count() == 4);
  CHECK(c.parallel_average == ParallelAverage::Informed);
}

TEST_CASE("json round trip keeps every field") {
  SimConfig c;
  c.action_rule = ActionRule::III;
  c.regime = Regime::DynamicNetwork;
  c.gossip_mechanism = GossipMechanism::Simple;
  c.parallel_average = ParallelAverage::All;
  c.piece_lifespan = 7;
  c.seed = 0xffffffffffffffffULL;
  c.triadic_table_path = "t.csv";
  const auto j = to_json(c);
  CHECK(j.begin().key() == "n_agents");
  const SimConfig back = config_from_json(json::parse(j.dump()));
  CHECK(to_json(back) == j);
  CHECK(back.seed == c.seed);
}

TEST_CASE("unknown keys and wrong types are field-level errors") {
  try {
    config_from_json(json{{"n_agnets", 16}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "n_agnets");
  }
  try {
    config_from_json(json{{"omega", "high"}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "omega");
  }
  CHECK_THROWS_AS(config_from_json(json{{"regime", "grid"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"tg_rounds", -1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
  CHECK(config_from_json(json{{"action_rule", 2}}).action_rule == ActionRule::II);
}

TEST_CASE("validation names the violated field") {
  SimConfig c;
  c.defector_fraction = 1.0;
  CHECK(failing_field(c) == "defector_fraction");
  c.allow_degenerate = true;
  CHECK(failing_field(c).empty());

  c = SimConfig{};
  c.n_agents = 2;
  CHECK(failing_field(c) == "n_agents");
  c = SimConfig{};
  c.cooperation_threshold = 1.5;
  CHECK(failing_field(c) == "cooperation_threshold");
  c = SimConfig{};
  c.total_steps = 1005;
  CHECK(failing_field(c) == "total_steps");
  c = SimConfig{};
  c.piece_lifespan = 11;
  CHECK(failing_field(c) == "piece_lifespan");
  c.gossip_mechanism = GossipMechanism::Parallel;
  CHECK(failing_field(c).empty());
  c = SimConfig{};
  c.regime = Regime::StaticNetwork;
  c.min_degree = 16;
  CHECK(failing_field(c) == "min_degree");
  c = SimConfig{};
  c.signed_pos_density = 0.8;
  c.signed_neg_density = 0.3;
  CHECK(failing_field(c) == "signed_neg_density");
  c = SimConfig{};
  c.multiplier = 1.0;
  CHECK(failing_field(c) == "multiplier");
}

TEST_CASE("ten times more rounds is a valid condition") {
  SimConfig c;
  c.tg_rounds = 100;
  c.gossip_budget = 1;
  CHECK_NOTHROW(validate(c));
  CHECK(c.steps_per_round() == 10);
  CHECK(c.effective_piece_lifespan() == 10);
}

TEST_CASE("overrides and assignments") {
  auto [key, value] = parse_assignment("gossip_mechanism=parallel");
  CHECK(key == "gossip_mechanism");
  CHECK(value == "parallel");
  auto [k2, v2] = parse_assignment("omega=0.25");
  CHECK(v2.is_number());
  CHECK_THROWS_AS(parse_assignment("omega"), ConfigError);
  CHECK_THROWS_AS(parse_assignment("=3"), ConfigError);

  const SimConfig c = apply_overrides(SimConfig{}, json{{key, value}, {k2, v2}});
  CHECK(c.gossip_mechanism == GossipMechanism::Parallel);
  CHECK(c.omega == 0.25);
  CHECK(c.n_agents == 16);
}

TEST_CASE("load_config reports unreadable files") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  const SimConfig c = load_config(GOSSIPSIM_CONFIG_DIR "/default.json");
  CHECK(to_json(c) == to_json(SimConfig{}));
}
