#include "doctest.h"

#include "common.hpp"
#include "countsynth/engine.hpp"
#include "countsynth/generator.hpp"
#include "countsynth/io.hpp"
#include "countsynth/simulate.hpp"

using namespace countsynth;
using namespace countsynth::testing;

TEST_CASE("parsing the shipped arena yields the drawn graph") {
  ParsedGame game = load_game("small_arena.game");
  CHECK(game.graph.state_count() == 5);
  CHECK(game.graph.transition_count() == 9);
  CHECK(game.graph.alphabet().letters(Player::Ego) == std::vector<std::string>{"x", "y"});
  CHECK(game.graph.alphabet().letters(Player::Adv) == std::vector<std::string>{"a", "b", "c"});
  CHECK(game.win.kind == WinKind::Safety);
  CHECK(game.win.states.count() == 5);
  REQUIRE(game.constraints.size() == 4);
  CHECK(game.constraints[2].kind == CcKind::Max);
  CHECK(game.constraints[3].player == Player::Adv);

  StateId s3 = *game.graph.find_state("3");
  CHECK(game.graph.successor(s3, action(game.graph, "x y")) == game.graph.find_state("4"));
  CHECK(game.graph.successor(s3, action(game.graph, "x")) == game.graph.find_state("2"));
}

TEST_CASE("parser diagnostics carry locations") {
  SUBCASE("alphabet restriction is caught at validation") {
    const char* text =
        "countgame v1\n"
        "alphabet ego x\n"
        "alphabet adv b\n"
        "state e ego\nstate a adv\ninitial e\n"
        "trans e -> a : b\n"  // ego state moves with an adversary letter
        "trans a -> e : b\n"
        "win safety all\n";
    try {
      parse_game(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("Alphabet restriction") != std::string::npos);
    }
  }
  SUBCASE("unclosed parenthesis in a constraint formula") {
    const char* text =
        "countgame v1\n"
        "alphabet ego x y\nalphabet adv b\n"
        "state e ego\nstate a adv\ninitial e\n"
        "trans e -> a : x\ntrans a -> e : b\n"
        "win safety all\n"
        "constraint C ego min 1 2 : x & (y\n";
    try {
      parse_game(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line == 10);
      CHECK(std::string(e.what()).find("expected ')'") != std::string::npos);
    }
  }
  SUBCASE("unknown states and letters") {
    CHECK_THROWS_AS(parse_game("countgame v1\nalphabet ego x\nalphabet adv b\n"
                               "state e ego\ninitial e\ntrans e -> nowhere : x\nwin safety all\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_game("countgame v1\nalphabet ego x\nalphabet adv b\n"
                               "state e ego\nstate a adv\ninitial e\ntrans e -> a : z\n"
                               "trans a -> e : b\nwin safety all\n"),
                    ParseError);
  }
  SUBCASE("missing pieces") {
    CHECK_THROWS_AS(parse_game(""), ParseError);
    CHECK_THROWS_AS(parse_game("countgame v1\nstate e ego\ninitial e\n"), ParseError);
  }
}

TEST_CASE("serialize and reparse give an isomorphic game") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorParams params;
    params.states = 8;
    params.ego_min_constraints = 1;
    params.ego_max_constraints = 1;
    params.adv_constraints = 1;
    params.adv_letters = 2;
    params.kind = static_cast<WinKind>(seed % 5);
    params.seed = seed;
    std::string text = generate_random_game(params);
    ParsedGame a = parse_game(text);
    std::string again = serialize_game(a.graph, a.win, a.constraints);
    ParsedGame b = parse_game(again);

    CHECK(a.graph.state_count() == b.graph.state_count());
    CHECK(a.graph.transition_count() == b.graph.transition_count());
    CHECK(a.win.kind == b.win.kind);
    CHECK(serialize_game(b.graph, b.win, b.constraints) == again);
  }
}

TEST_CASE("generation is deterministic and rational") {
  GeneratorParams params;
  params.states = 6;
  params.adv_constraints = 1;
  params.seed = 1;
  std::string one = generate_random_game(params);
  std::string two = generate_random_game(params);
  CHECK(one == two);  // byte-equal

  for (uint64_t seed = 1; seed <= 50; ++seed) {
    params.seed = seed;
    ParsedGame game = parse_game(generate_random_game(params));
    CHECK(validate_graph(game.graph).valid());
    CHECK(validate_rationality(game.graph, game.constraints).valid());
  }
}

TEST_CASE("strategy files round-trip") {
  ParsedGame game = load_game("two_loops.game");
  SynthesisResult result = run_incremental(game.graph, game.win, game.constraints);
  REQUIRE(result.strategy.has_value());
  std::string text = serialize_strategy(*result.strategy, game.graph);
  StrategyMachine loaded = parse_strategy(text, game.graph);
  CHECK(loaded.size() == result.strategy->size());
  CHECK(loaded.initial == result.strategy->initial);
  for (uint32_t m = 0; m < loaded.size(); ++m) {
    CHECK(loaded.states[m].base == result.strategy->states[m].base);
    CHECK(loaded.states[m].owner == result.strategy->states[m].owner);
    CHECK(loaded.states[m].emit == result.strategy->states[m].emit);
    CHECK(loaded.states[m].edges == result.strategy->states[m].edges);
  }

  // the reloaded machine simulates identically
  SimulationReport sim = simulate(game.graph, game.win, game.constraints, loaded, {300, 20, 3});
  CHECK(sim.runs_with_ego_violation == 0);
}

TEST_CASE("simulation of a hand-built strategy for the small arena") {
  // on state 1 play y unless y was played in the last two own turns, then x;
  // on state 3 play x if the last own turn was y, otherwise x and y;
  // state 5 has only y
  ParsedGame game = load_game("small_arena.game");
  const GameGraph& g = game.graph;

  // machine states track (game state, y-history of the last two own turns)
  // histories: 0 = no y in last two, 1 = y last turn, 2 = y the turn before
  struct Key {
    StateId s;
    int y;
    bool operator<(const Key& o) const { return s != o.s ? s < o.s : y < o.y; }
  };
  StrategyMachine m;
  std::map<Key, uint32_t> index;
  std::vector<Key> todo;
  auto intern = [&](Key k) {
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(m.states.size());
    index.emplace(k, id);
    m.states.push_back({});
    m.states[id].base = k.s;
    m.states[id].owner = g.owner(k.s);
    todo.push_back(k);
    return id;
  };
  ActionSet ax = action(g, "x"), ay = action(g, "y"), axy = action(g, "x y");
  m.initial = intern({*g.find_state("1"), 0});
  while (!todo.empty()) {
    Key k = todo.back();
    todo.pop_back();
    uint32_t id = index.at(k);
    auto push_y = [&](bool played_y) { return played_y ? 1 : (k.y == 1 ? 2 : 0); };
    if (g.owner(k.s) == Player::Ego) {
      ActionSet act;
      if (g.state_name(k.s) == "1")
        act = (k.y == 0) ? ay : ax;
      else if (g.state_name(k.s) == "3")
        act = (k.y == 1) ? ax : axy;
      else
        act = ay;  // state 5
      bool plays_y = (act & ay) != 0;
      uint32_t to = intern({*g.successor(k.s, act), push_y(plays_y)});
      m.states[id].emit = act;
      m.states[id].edges.push_back({act, to});
    } else {
      for (const GameGraph::Edge& e : g.out(k.s)) {
        uint32_t to = intern({e.to, k.y});
        m.states[id].edges.push_back({e.action, to});
      }
    }
  }

  SimulationReport sim = simulate(g, game.win, game.constraints, m, {500, 40, 9});
  CHECK(sim.runs_with_ego_violation == 0);
  CHECK(sim.total_unsafe_visits == 0);
}

TEST_CASE("simulation with zero runs is an empty report") {
  ParsedGame game = load_game("two_loops.game");
  SynthesisResult result = run_incremental(game.graph, game.win, game.constraints);
  SimulationReport sim =
      simulate(game.graph, game.win, game.constraints, *result.strategy, {100, 0, 1});
  CHECK(sim.per_run.empty());
  CHECK(sim.runs == 0);
}

TEST_CASE("reports carry the increment table and bench rows the final counts") {
  ParsedGame game = load_game("two_loops.game");
  SynthesisResult result = run_incremental(game.graph, game.win, game.constraints);
  std::string report = format_report(result.report);
  CHECK(report.find("decision WINNABLE") != std::string::npos);
  CHECK(report.find("increment 1 lengths C=1") != std::string::npos);
  CHECK(report.find("region 10") != std::string::npos);
  CHECK(report.find("under-approximations") != std::string::npos);

  SynthesisResult direct = run_direct(game.graph, game.win, game.constraints);
  std::string direct_report = format_report(direct.report);
  CHECK(direct_report.find("increments 1") != std::string::npos);

  std::vector<BenchRow> rows;
  for (int i = 0; i < 3; ++i) {
    rows.push_back(bench_row("g" + std::to_string(i), "sequential", result));
    rows.push_back(bench_row("g" + std::to_string(i), "alternating", result));
    rows.push_back(bench_row("g" + std::to_string(i), "direct", direct));
  }
  std::string csv = format_bench_csv(rows);
  CHECK(csv.substr(0, csv.find('\n')) == kBenchHeader);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);  // header + 9 rows
}

TEST_CASE("situation graph dump is stable and readable") {
  ParsedGame game = load_game("two_loops.game");
  std::vector<ConstraintInstance> instances = {{&game.constraints[0], 1}};
  SituationGraph sg = build_situation_graph(game.graph, instances, nullptr);
  std::string dump = sg.dump(game.graph);
  CHECK(dump.find("(1, C=(n))") != std::string::npos);
  CHECK(dump.find("(2, C=(0)) adv to-lose-sink") != std::string::npos);
  CHECK(dump.find("(lE, .)") != std::string::npos);
}
