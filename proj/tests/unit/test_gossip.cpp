#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "gossipsim/gossip.hpp"
#include "gossipsim/io.hpp"

using namespace gossipsim;

namespace {

TargetRelation rel(char c) {
  return c == '+' ? TargetRelation::Positive : c == '-' ? TargetRelation::Negative : TargetRelation::Absent;
}

TriadConfig triad(const char* spec) {
  // "sr st rt v", e.g. "+ 0 - n"
  return TriadConfig{spec[0] == '+' ? TieSign::Positive : TieSign::Negative, rel(spec[2]), rel(spec[4]),
                     spec[6] == 'n' ? Valence::Negative : Valence::PositiveOrNeutral};
}

GossipPiece make_piece(AgentId origin, AgentId target, double payload, std::size_t lifespan) {
  GossipPiece p;
  p.originator = origin;
  p.target = target;
  p.payload = payload;
  p.valence = payload < 0 ? Valence::Negative : Valence::PositiveOrNeutral;
  p.steps_remaining = lifespan;
  p.frontier = {origin};
  p.informed = {origin};
  return p;
}

SignedNetwork path(std::size_t n) {
  SignedNetwork net(n);
  for (AgentId a = 0; a + 1 < n; ++a) net.add_edge(a, a + 1, TieSign::Positive);
  return net;
}

// Agents reachable from origin without passing through target.
std::set<AgentId> reachable(const SignedNetwork& net, AgentId origin, AgentId target) {
  std::set<AgentId> seen{origin};
  std::queue<AgentId> q;
  q.push(origin);
  while (!q.empty()) {
    const AgentId a = q.front();
    q.pop();
    for (const auto& [b, s] : net.neighbors(a)) {
      if (b != target && seen.insert(b).second) q.push(b);
    }
  }
  return seen;
}

std::string table_csv(const TriadicTable& t) {
  std::ostringstream out;
  write_triadic_table(out, t);
  return out.str();
}

}  // namespace

TEST_CASE("parallel update") {
  ImageMatrix zero(4);
  const auto zero_rep = parallel_update(zero);
  for (double v : zero_rep.values()) CHECK(v == 0.0);

  ImageMatrix img(3);
  img.set(1, 0, 0.2);
  img.set(2, 0, -0.4);
  for (ParallelAverage mode : {ParallelAverage::Informed, ParallelAverage::All}) {
    const auto rep = parallel_update(img, mode);
    CHECK(rep(1, 0) == doctest::Approx(-0.1));
    CHECK(rep(2, 0) == doctest::Approx(-0.1));
    CHECK(rep(0, 0) == rep(1, 0));
    CHECK(rep(0, 1) == 0.0);
  }

  // An observer with no experience of agent 0 only counts under All.
  ImageMatrix four(4);
  four.set(1, 0, 0.2);
  four.set(2, 0, -0.4);
  CHECK(parallel_update(four, ParallelAverage::Informed)(3, 0) == doctest::Approx(-0.1));
  CHECK(parallel_update(four, ParallelAverage::All)(3, 0) == doctest::Approx(-0.2 / 3));
}

TEST_CASE("parallel update columns are constant") {
  RngStream rng(1, "values");
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.uniform_index(20);
    ImageMatrix img(n);
    for (AgentId i = 0; i < n; ++i)
      for (AgentId j = 0; j < n; ++j)
        if (i != j && rng.bernoulli(0.6)) img.set(i, j, std::round(rng.uniform01() * 20 - 10) / 10);
    for (ParallelAverage mode : {ParallelAverage::Informed, ParallelAverage::All}) {
      const auto rep = parallel_update(img, mode);
      for (AgentId j = 0; j < n; ++j)
        for (AgentId i = 0; i < n; ++i) {
          CHECK(rep(i, j) == rep(0, j));
          CHECK(rep(i, j) >= -1.0);
          CHECK(rep(i, j) <= 1.0);
        }
    }
  }
}

TEST_CASE("emit_pieces") {
  SignedNetwork net(4);
  net.add_edge(0, 1, TieSign::Positive);
  net.add_edge(1, 2, TieSign::Negative);
  RngStream rng(2, "gossip");

  ImageMatrix zero(4);
  CHECK(emit_pieces(zero, net, 10, 10, rng).empty());

  ImageMatrix img(4);
  img.set(0, 2, -0.3);
  img.set(0, 3, 0.2);
  img.set(3, 0, 0.5);  // agent 3 has no tie, so never originates
  const auto pieces = emit_pieces(img, net, 10, 7, rng);
  REQUIRE(pieces.size() == 10);
  for (const auto& p : pieces) {
    CHECK(p.originator == 0);
    CHECK(p.payload == img(0, p.target));
    CHECK((p.valence == Valence::Negative) == (p.payload < 0));
    CHECK(p.steps_remaining == 7);
    CHECK(p.frontier == std::vector<AgentId>{0});
    CHECK_FALSE(p.is_informed(p.target));
  }
  CHECK(emit_pieces(img, net, 0, 7, rng).empty());
}

TEST_CASE("reputation update on transmission") {
  SignedNetwork net(3);
  net.add_edge(0, 1, TieSign::Positive);
  ReputationMatrix rep(3);
  RngStream rng(3, "gossip");
  auto piece = make_piece(0, 2, -0.5, 10);
  const auto r = simple_step(piece, net, rep, 0.3, rng);
  CHECK(r.interacted);
  CHECK(r.transmitted);
  CHECK(rep(1, 2) == doctest::Approx(-0.15));
  CHECK(piece.is_informed(1));
  CHECK(piece.steps_remaining == 9);

  // Nobody left to tell: the piece ends without consuming anything else.
  const auto r2 = simple_step(piece, net, rep, 0.3, rng);
  CHECK_FALSE(r2.interacted);
  CHECK(piece.steps_remaining == 0);
  CHECK(rep(1, 2) == doctest::Approx(-0.15));
  CHECK_THROWS_AS(simple_step(piece, net, rep, 0.3, rng), ContractViolation);
}

TEST_CASE("default triadic table") {
  const auto t = TriadicTable::default_table();
  // Hand-written list of the 11 transmitting cells.
  const std::set<std::string> yes = {"+ + + p", "+ + 0 p", "+ 0 + p", "+ 0 0 p", "+ + - n", "+ + 0 n",
                                     "+ - - n", "+ - 0 n", "+ 0 - n", "+ 0 0 n", "- - - n"};
  std::size_t count = 0;
  for (char sr : {'+', '-'})
    for (char st : {'+', '-', '0'})
      for (char rt : {'+', '-', '0'})
        for (char v : {'p', 'n'}) {
          const std::string key{sr, ' ', st, ' ', rt, ' ', v};
          CHECK_MESSAGE(t.transmits(triad(key.c_str())) == (yes.count(key) == 1), key);
          ++count;
        }
  CHECK(count == TriadicTable::kEntries);
  CHECK(t.transmits(triad("+ + + p")));
  CHECK(t.transmits(triad("- - - n")));
  CHECK(t.lint().empty());

  for (std::size_t i = 0; i < TriadicTable::kEntries; ++i) CHECK(TriadicTable::index(TriadicTable::config_at(i)) == i);
  CHECK(t.checksum().size() == 16);
  CHECK(t.checksum() != TriadicTable::all_yes().checksum());
}

TEST_CASE("shipped table file equals the built-in default") {
  const auto loaded = load_triadic_table(GOSSIPSIM_DATA_DIR "/default_triadic_table.csv");
  CHECK(loaded == TriadicTable::default_table());
}

TEST_CASE("table csv round trip and errors") {
  auto t = TriadicTable::default_table();
  t.set(triad("- + 0 p"), true);
  std::istringstream in(table_csv(t));
  CHECK(parse_triadic_table(in, "mem") == t);

  // Drop one row.
  std::string text = table_csv(TriadicTable::default_table());
  const std::string row = "-,0,+,neg,0\n";
  const auto at = text.find(row);
  REQUIRE(at != std::string::npos);
  std::string missing = text;
  missing.erase(at, row.size());
  std::istringstream in35(missing);
  try {
    parse_triadic_table(in35, "t35.csv");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("sr=- st=0 rt=+ valence=neg") != std::string::npos);
  }

  std::istringstream dup(text + "+,+,+,pos,0\n");
  try {
    parse_triadic_table(dup, "dup.csv");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }

  std::istringstream bad(text.substr(0, text.find('\n') + 1) + "+,x,+,pos,1\n");
  try {
    parse_triadic_table(bad, "bad.csv");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  std::istringstream noheader("+,+,+,pos,1\n");
  CHECK_THROWS_AS(parse_triadic_table(noheader, "h.csv"), ParseError);
  CHECK_THROWS(load_triadic_table("/nonexistent/table.csv"));
}

TEST_CASE("lint flags negative gossip to the target's friends") {
  auto t = TriadicTable::default_table();
  t.set(triad("+ 0 + n"), true);
  const auto w = t.lint();
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("sr=+ st=0 rt=+ valence=neg") != std::string::npos);
}

TEST_CASE("simple diffusion on a path reaches everyone but the target") {
  const auto net = path(5);
  for (AgentId target : {4, 2}) {
    ReputationMatrix rep(5);
    RngStream rng(4, "gossip");
    auto piece = make_piece(0, target, 0.4, 10);
    while (piece.steps_remaining > 0) {
      if (!simple_step(piece, net, rep, 0.3, rng).interacted) break;
    }
    const std::set<AgentId> informed(piece.informed.begin(), piece.informed.end());
    CHECK(informed == reachable(net, 0, target));
    for (AgentId a : informed)
      if (a != 0) CHECK(rep(a, target) == doctest::Approx(0.12));
  }
}

TEST_CASE("gossip spread properties") {
  RngStream rng(5, "props");
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 4 + rng.uniform_index(12);
    SignedNetwork net(n);
    for (AgentId a = 0; a < n; ++a)
      for (AgentId b = a + 1; b < n; ++b) {
        const double u = rng.uniform01();
        if (u < 0.25) net.add_edge(a, b, TieSign::Positive);
        else if (u < 0.35) net.add_edge(a, b, TieSign::Negative);
      }
    const AgentId origin = rng.uniform_index(n);
    AgentId target = rng.uniform_index(n - 1);
    if (target >= origin) ++target;
    const std::size_t lifespan = 1 + rng.uniform_index(12);
    const double omega = trial % 5 == 0 ? 0.0 : 0.3;

    ReputationMatrix rep(n);
    const ReputationMatrix before = rep;
    auto piece = make_piece(origin, target, -0.6, lifespan);
    const bool triadic = trial % 2 == 0;
    std::size_t steps = 0, transmissions = 0;
    const auto table = TriadicTable::default_table();
    while (piece.steps_remaining > 0) {
      const auto r = triadic ? triadic_step(piece, net, table, rep, omega, rng) : simple_step(piece, net, rep, omega, rng);
      if (!r.interacted) break;
      ++steps;
      transmissions += r.transmitted;
      if (triadic) {
        CHECK(table.transmits(*r.triad) == r.transmitted);
      } else {
        CHECK(r.transmitted);
      }
    }
    CHECK(steps <= lifespan);
    CHECK(transmissions <= steps);
    CHECK(piece.informed.size() <= lifespan + 1);
    CHECK(piece.informed.size() == transmissions + 1);
    CHECK_FALSE(piece.is_informed(target));
    const auto reach = reachable(net, origin, target);
    for (AgentId a : piece.informed) CHECK(reach.count(a) == 1);
    if (omega == 0.0) CHECK(rep == before);
  }
}

TEST_CASE("all-yes triadic steps match simple steps") {
  SignedNetwork net(8);
  for (AgentId a = 0; a < 8; ++a)
    for (AgentId b = a + 1; b < 8; ++b)
      if ((a * 3 + b) % 4 != 0) net.add_edge(a, b, (a + b) % 3 == 0 ? TieSign::Negative : TieSign::Positive);
  const auto yes = TriadicTable::all_yes();
  ReputationMatrix r1(8), r2(8);
  RngStream g1(6, "gossip"), g2(6, "gossip");
  auto p1 = make_piece(1, 5, -0.3, 10), p2 = make_piece(1, 5, -0.3, 10);
  while (p1.steps_remaining > 0) {
    const auto a = triadic_step(p1, net, yes, r1, 0.3, g1);
    const auto b = simple_step(p2, net, r2, 0.3, g2);
    CHECK(a.interacted == b.interacted);
    CHECK(a.transmitted == b.transmitted);
    CHECK(p1.informed == p2.informed);
  }
  CHECK(p2.steps_remaining == 0);
  CHECK(r1 == r2);
}
