#include "doctest.h"

#include "common.hpp"
#include "countsynth/generator.hpp"
#include "countsynth/rng.hpp"

using namespace countsynth;
using namespace countsynth::testing;

namespace {

bool has_violation(const ValidationReport& r, const char* rule) {
  for (const Violation& v : r.violations)
    if (v.rule == rule) return true;
  return false;
}

}  // namespace

TEST_CASE("the shipped small arena is a valid game graph") {
  ParsedGame game = load_game("small_arena.game");
  CHECK(validate_graph(game.graph).valid());
  CHECK(game.graph.state_count() == 5);
  CHECK(game.graph.transition_count() == 9);
}

TEST_CASE("validate_graph reports a deadlocked state with a witness") {
  GameGraph g;
  g.alphabet().add("x", Player::Ego);
  StateId s0 = g.add_state("s0", Player::Ego);
  StateId s1 = g.add_state("dead", Player::Adv);
  g.set_initial(s0);
  g.add_transition(s0, 1, s1);
  g.seal();
  ValidationReport r = validate_graph(g);
  CHECK_FALSE(r.valid());
  CHECK(has_violation(r, rules::kDeadlock));
  CHECK(r.summary().find("dead") != std::string::npos);
}

TEST_CASE("validate_graph reports nondeterministic moves") {
  GameGraph g;
  g.alphabet().add("x", Player::Ego);
  StateId s0 = g.add_state("s0", Player::Ego);
  StateId a0 = g.add_state("a0", Player::Adv);
  StateId a1 = g.add_state("a1", Player::Adv);
  g.set_initial(s0);
  g.add_transition(s0, 1, a0);
  g.add_transition(s0, 1, a1);
  g.add_transition(a0, 0, s0);
  g.add_transition(a1, 0, s0);
  g.seal();
  ValidationReport r = validate_graph(g);
  CHECK(has_violation(r, rules::kDeterminacy));
}

TEST_CASE("validate_graph reports bipartition, alphabet and initial-owner issues") {
  GameGraph g;
  g.alphabet().add("x", Player::Ego);
  g.alphabet().add("b", Player::Adv);
  StateId e0 = g.add_state("e0", Player::Ego);
  StateId e1 = g.add_state("e1", Player::Ego);
  StateId a0 = g.add_state("a0", Player::Adv);
  g.set_initial(a0);
  g.add_transition(e0, 1, e1);  // ego -> ego
  g.add_transition(e1, 2, a0);  // ego moves with an adversary letter
  g.add_transition(a0, 0, e0);
  g.seal();
  ValidationReport r = validate_graph(g);
  CHECK(has_violation(r, rules::kBipartition));
  CHECK(has_violation(r, rules::kAlphabet));
  CHECK(has_violation(r, rules::kInitialOwner));
}

TEST_CASE("rationality: forced-violation game is rejected with a witness") {
  ParsedGame game = load_game("forced_violation.game");
  CHECK(validate_graph(game.graph).valid());
  ValidationReport r = validate_rationality(game.graph, game.constraints);
  CHECK_FALSE(r.valid());
  CHECK(has_violation(r, rules::kRationality));
  // the stuck situation is state 6 holding a fresh b
  CHECK(r.summary().find("(6") != std::string::npos);
}

TEST_CASE("rationality: tight-budget game flips between window lengths 3 and 2") {
  ParsedGame game = load_game("tight_budget.game");
  REQUIRE(game.constraints.size() == 1);
  CHECK(game.constraints[0].window == 3);
  CHECK(validate_rationality(game.graph, game.constraints).valid());

  game.constraints[0].window = 2;
  CHECK_FALSE(validate_rationality(game.graph, game.constraints).valid());

  // window 1 works: playing b on every turn keeps the play in the 2-3 loop
  game.constraints[0].window = 1;
  CHECK(validate_rationality(game.graph, game.constraints).valid());

  // two b out of three turns fails on the prefix through state 5
  game.constraints[0].window = 3;
  game.constraints[0].bound = 2;
  CHECK_FALSE(validate_rationality(game.graph, game.constraints).valid());
}

TEST_CASE("rationality rejects malformed constraints") {
  ParsedGame game = load_game("tight_budget.game");
  CountingConstraint bad = game.constraints[0];
  bad.bound = 5;  // k > l
  CHECK_THROWS_AS(validate_rationality(game.graph, {bad}), InputError);

  CountingConstraint foreign = game.constraints[0];
  foreign.formula = ActionFormula::atom(*game.graph.alphabet().find("a"));  // ego letter
  CHECK_THROWS_AS(validate_rationality(game.graph, {foreign}), InputError);
}

TEST_CASE("rationality is monotone: dropping an adversary constraint keeps validity") {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    GeneratorParams params;
    params.states = 6;
    params.adv_constraints = 2;
    params.adv_letters = 2;
    params.max_window = 3;
    params.seed = seed;
    std::string text;
    try {
      text = generate_random_game(params);
    } catch (const InputError&) {
      continue;  // jointly unsatisfiable adversary formulas; no rational game exists
    }
    ParsedGame game = parse_game(text);
    REQUIRE(validate_rationality(game.graph, game.constraints).valid());
    for (size_t drop = 0; drop < game.constraints.size(); ++drop) {
      std::vector<CountingConstraint> fewer;
      for (size_t i = 0; i < game.constraints.size(); ++i)
        if (i != drop) fewer.push_back(game.constraints[i]);
      CHECK(validate_rationality(game.graph, fewer).valid());
    }
  }
}

TEST_CASE("prefix validation follows transitions") {
  ParsedGame game = load_game("small_arena.game");
  Prefix ok = make_prefix(game.graph, {"1", "y", "2", "a", "3", "x", "2"});
  CHECK_NOTHROW(validate_prefix(game.graph, ok, true));

  Prefix bad = make_prefix(game.graph, {"1", "y", "2", "a", "3", "y", "2"});
  CHECK_THROWS_AS(validate_prefix(game.graph, bad), InputError);

  Prefix not_initial = make_prefix(game.graph, {"3", "x", "2"});
  CHECK_NOTHROW(validate_prefix(game.graph, not_initial));
  CHECK_THROWS_AS(validate_prefix(game.graph, not_initial, true), InputError);
}
