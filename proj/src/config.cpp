#include "gossipsim/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gossipsim/types.hpp"

namespace gossipsim {

using nlohmann::json;

std::string_view to_string(ActionRule r) {
  switch (r) {
    case ActionRule::I: return "I";
    case ActionRule::II: return "II";
    case ActionRule::III: return "III";
  }
  return "?";
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::WellMixed: return "well_mixed";
    case Regime::StaticNetwork: return "static_network";
    case Regime::DynamicNetwork: return "dynamic_network";
  }
  return "?";
}

std::string_view to_string(GossipMechanism m) {
  switch (m) {
    case GossipMechanism::Parallel: return "parallel";
    case GossipMechanism::Simple: return "simple";
    case GossipMechanism::Triadic: return "triadic";
  }
  return "?";
}

ActionRule parse_action_rule(std::string_view s) {
  if (s == "I" || s == "1") return ActionRule::I;
  if (s == "II" || s == "2") return ActionRule::II;
  if (s == "III" || s == "3") return ActionRule::III;
  throw ConfigError("action_rule", "expected one of I, II, III, got '" + std::string(s) + "'");
}

Regime parse_regime(std::string_view s) {
  if (s == "well_mixed") return Regime::WellMixed;
  if (s == "static_network") return Regime::StaticNetwork;
  if (s == "dynamic_network") return Regime::DynamicNetwork;
  throw ConfigError("regime", "expected one of well_mixed, static_network, dynamic_network, got '" + std::string(s) + "'");
}

GossipMechanism parse_gossip_mechanism(std::string_view s) {
  if (s == "parallel") return GossipMechanism::Parallel;
  if (s == "simple") return GossipMechanism::Simple;
  if (s == "triadic") return GossipMechanism::Triadic;
  throw ConfigError("gossip_mechanism", "expected one of parallel, simple, triadic, got '" + std::string(s) + "'");
}

std::string_view to_string(ParallelAverage a) {
  return a == ParallelAverage::Informed ? "informed" : "all";
}

ParallelAverage parse_parallel_average(std::string_view s) {
  if (s == "informed") return ParallelAverage::Informed;
  if (s == "all") return ParallelAverage::All;
  throw ConfigError("parallel_average", "expected informed or all, got '" + std::string(s) + "'");
}

std::size_t SimConfig::defector_count() const {
  return static_cast<std::size_t>(std::llround(defector_fraction * static_cast<double>(n_agents)));
}

std::size_t SimConfig::effective_piece_lifespan() const {
  if (piece_lifespan) return *piece_lifespan;
  if (gossip_budget == 0) return 0;
  return steps_per_round() / gossip_budget;
}

void validate(const SimConfig& c) {
  auto require = [](bool ok, const char* field, const std::string& msg) {
    if (!ok) throw ConfigError(field, msg);
  };
  auto unit = [&](double v, const char* field) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, field, "must lie in [0, 1]");
  };

  require(c.n_agents >= 3 && c.n_agents <= 10000, "n_agents", "must lie in [3, 10000]");
  require(std::isfinite(c.endowment) && c.endowment >= 0.0, "endowment", "must be a non-negative number");
  unit(c.defector_fraction, "defector_fraction");
  const std::size_t defectors = c.defector_count();
  if (!c.allow_degenerate) {
    require(defectors > 0 && defectors < c.n_agents, "defector_fraction",
            "round(defector_fraction * n_agents) = " + std::to_string(defectors) +
                " leaves a single-type population (set allow_degenerate for control runs)");
  }
  require(std::isfinite(c.cooperation_threshold) && c.cooperation_threshold >= -1.0 && c.cooperation_threshold <= 1.0,
          "cooperation_threshold", "must lie in [-1, 1]");
  unit(c.omega, "omega");
  unit(c.image_weight, "image_weight");
  require(std::isfinite(c.multiplier) && c.multiplier > 1.0, "multiplier", "must be greater than 1");
  require(std::isfinite(c.stake) && c.stake > 0.0, "stake", "must be positive");
  unit(c.return_fraction, "return_fraction");
  require(std::isfinite(c.image_step) && c.image_step > 0.0 && c.image_step <= 1.0, "image_step", "must lie in (0, 1]");
  require(c.tg_rounds >= 1, "tg_rounds", "must be at least 1");
  require(c.total_steps % c.tg_rounds == 0, "total_steps", "must be a multiple of tg_rounds");
  if (c.uses_gossip_network()) {
    require(c.total_steps >= c.tg_rounds * c.gossip_budget, "total_steps",
            "must be at least tg_rounds * gossip_budget for simple and triadic gossip");
    require(c.gossip_budget * c.effective_piece_lifespan() <= c.steps_per_round(), "piece_lifespan",
            "gossip_budget * piece_lifespan exceeds the steps between rounds");
  }
  unit(c.neighbor_play_prob, "neighbor_play_prob");
  if (c.uses_game_network()) {
    require(c.min_degree >= 1 && c.min_degree <= c.n_agents - 1, "min_degree", "must lie in [1, n_agents - 1]");
  }
  require(c.leniency_length >= 0, "leniency_length", "must be non-negative");
  unit(c.signed_pos_density, "signed_pos_density");
  unit(c.signed_neg_density, "signed_neg_density");
  require(c.signed_pos_density + c.signed_neg_density <= 1.0, "signed_neg_density",
          "signed_pos_density + signed_neg_density must not exceed 1");
}

namespace {

struct FieldCodec {
  std::function<void(const json&, SimConfig&)> read;
  std::function<json(const SimConfig&)> write;
};

double read_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::uint64_t read_unsigned(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(key, "must be non-negative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && std::floor(d) == d && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError(key, "expected a non-negative integer");
}

std::string read_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

template <class T>
FieldCodec number_field(T SimConfig::*member) {
  return {[member](const json& v, SimConfig& c) {
            if constexpr (std::is_same_v<T, double>) {
              c.*member = read_number(v, "");
            } else if constexpr (std::is_same_v<T, int>) {
              if (!v.is_number_integer()) throw ConfigError("", "expected an integer");
              c.*member = v.get<int>();
            } else {
              c.*member = static_cast<T>(read_unsigned(v, ""));
            }
          },
          [member](const SimConfig& c) { return json(c.*member); }};
}

FieldCodec optional_string_field(std::optional<std::string> SimConfig::*member) {
  return {[member](const json& v, SimConfig& c) {
            if (v.is_null()) {
              c.*member = std::nullopt;
            } else {
              c.*member = read_string(v, "");
            }
          },
          [member](const SimConfig& c) { return (c.*member) ? json(*(c.*member)) : json(nullptr); }};
}

FieldCodec bool_field(bool SimConfig::*member) {
  return {[member](const json& v, SimConfig& c) {
            if (!v.is_boolean()) throw ConfigError("", "expected true or false");
            c.*member = v.get<bool>();
          },
          [member](const SimConfig& c) { return json(c.*member); }};
}

// Key order here is the serialization order.
const std::vector<std::pair<std::string, FieldCodec>>& codecs() {
  static const std::vector<std::pair<std::string, FieldCodec>> table = [] {
    std::vector<std::pair<std::string, FieldCodec>> t;
    t.emplace_back("n_agents", number_field(&SimConfig::n_agents));
    t.emplace_back("endowment", number_field(&SimConfig::endowment));
    t.emplace_back("defector_fraction", number_field(&SimConfig::defector_fraction));
    t.emplace_back("cooperation_threshold", number_field(&SimConfig::cooperation_threshold));
    t.emplace_back("action_rule", FieldCodec{[](const json& v, SimConfig& c) {
                                               if (v.is_number_integer()) {
                                                 c.action_rule = parse_action_rule(std::to_string(v.get<int>()));
                                               } else {
                                                 c.action_rule = parse_action_rule(read_string(v, "action_rule"));
                                               }
                                             },
                                             [](const SimConfig& c) { return json(to_string(c.action_rule)); }});
    t.emplace_back("regime", FieldCodec{[](const json& v, SimConfig& c) { c.regime = parse_regime(read_string(v, "regime")); },
                                        [](const SimConfig& c) { return json(to_string(c.regime)); }});
    t.emplace_back("gossip_mechanism",
                   FieldCodec{[](const json& v, SimConfig& c) {
                                c.gossip_mechanism = parse_gossip_mechanism(read_string(v, "gossip_mechanism"));
                              },
                              [](const SimConfig& c) { return json(to_string(c.gossip_mechanism)); }});
    t.emplace_back("parallel_average",
                   FieldCodec{[](const json& v, SimConfig& c) {
                                c.parallel_average = parse_parallel_average(read_string(v, "parallel_average"));
                              },
                              [](const SimConfig& c) { return json(to_string(c.parallel_average)); }});
    t.emplace_back("omega", number_field(&SimConfig::omega));
    t.emplace_back("image_weight", number_field(&SimConfig::image_weight));
    t.emplace_back("multiplier", number_field(&SimConfig::multiplier));
    t.emplace_back("stake", number_field(&SimConfig::stake));
    t.emplace_back("return_fraction", number_field(&SimConfig::return_fraction));
    t.emplace_back("image_step", number_field(&SimConfig::image_step));
    t.emplace_back("total_steps", number_field(&SimConfig::total_steps));
    t.emplace_back("tg_rounds", number_field(&SimConfig::tg_rounds));
    t.emplace_back("burnin_rounds", number_field(&SimConfig::burnin_rounds));
    t.emplace_back("gossip_budget", number_field(&SimConfig::gossip_budget));
    t.emplace_back("piece_lifespan", FieldCodec{[](const json& v, SimConfig& c) {
                                                  if (v.is_null()) {
                                                    c.piece_lifespan = std::nullopt;
                                                  } else {
                                                    c.piece_lifespan = read_unsigned(v, "piece_lifespan");
                                                  }
                                                },
                                                [](const SimConfig& c) {
                                                  return c.piece_lifespan ? json(*c.piece_lifespan) : json(nullptr);
                                                }});
    t.emplace_back("neighbor_play_prob", number_field(&SimConfig::neighbor_play_prob));
    t.emplace_back("min_degree", number_field(&SimConfig::min_degree));
    t.emplace_back("leniency_length", number_field(&SimConfig::leniency_length));
    t.emplace_back("seed", number_field(&SimConfig::seed));
    t.emplace_back("triadic_table_path", optional_string_field(&SimConfig::triadic_table_path));
    t.emplace_back("signed_network_path", optional_string_field(&SimConfig::signed_network_path));
    t.emplace_back("signed_pos_density", number_field(&SimConfig::signed_pos_density));
    t.emplace_back("signed_neg_density", number_field(&SimConfig::signed_neg_density));
    t.emplace_back("reset_resources_after_burnin", bool_field(&SimConfig::reset_resources_after_burnin));
    t.emplace_back("allow_degenerate", bool_field(&SimConfig::allow_degenerate));
    return t;
  }();
  return table;
}

const FieldCodec* find_codec(const std::string& key) {
  for (const auto& [name, codec] : codecs()) {
    if (name == key) return &codec;
  }
  return nullptr;
}

}  // namespace

nlohmann::ordered_json to_json(const SimConfig& config) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [name, codec] : codecs()) out[name] = codec.write(config);
  return out;
}

SimConfig apply_overrides(const SimConfig& base, const json& overrides) {
  if (!overrides.is_object()) throw ConfigError("<document>", "configuration must be a flat JSON object");
  SimConfig out = base;
  for (const auto& [key, value] : overrides.items()) {
    const FieldCodec* codec = find_codec(key);
    if (codec == nullptr) throw ConfigError(key, "unknown configuration key");
    try {
      codec->read(value, out);
    } catch (const ConfigError& e) {
      // Codecs may not know their own key; re-raise with it.
      if (e.field().empty()) {
        std::string msg = e.what();
        throw ConfigError(key, msg.substr(msg.find(": ") + 2));
      }
      throw;
    } catch (const json::exception& e) {
      throw ConfigError(key, e.what());
    }
  }
  return out;
}

SimConfig config_from_json(const json& doc) { return apply_overrides(SimConfig{}, doc); }

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open configuration file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", path + ": " + e.what());
  }
  return config_from_json(doc);
}

std::pair<std::string, json> parse_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("<override>", "expected key=value, got '" + std::string(assignment) + "'");
  }
  std::string key(assignment.substr(0, eq));
  std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  return {key, value};
}

}  // namespace gossipsim
