#include "doctest.h"

#include "common.hpp"
#include "countsynth/constraints.hpp"
#include "countsynth/rng.hpp"
#include "oracle.hpp"

using namespace countsynth;
using namespace countsynth::testing;

namespace {

// Runs the monitor over a sequence of own-turn hits for one constraint.
bool bits_satisfiable(const std::vector<bool>& bits, uint32_t k, uint32_t l, CcKind kind) {
  Alphabet alpha;
  uint32_t a = alpha.add("a", Player::Ego);
  ConstraintMonitor monitor({cc("C", Player::Ego, kind, ActionFormula::atom(a), k, l)}, alpha);
  for (bool hit : bits) monitor.step(Player::Ego, hit ? (1u << a) : 0);
  return monitor.all_satisfiable();
}

}  // namespace

TEST_CASE("translate_max_to_min") {
  Alphabet alpha;
  uint32_t y = alpha.add("y", Player::Ego);

  CountingConstraint max23 = cc("C3", Player::Ego, CcKind::Max, ActionFormula::atom(y), 2, 3);
  CountingConstraint t = translate_max_to_min(max23);
  CHECK(t.kind == CcKind::Min);
  CHECK(t.bound == 1);
  CHECK(t.window == 3);
  CHECK(t.id == "C3~min");
  CHECK(t.formula.eval(0));         // !y holds when y is not played
  CHECK_FALSE(t.formula.eval(1u << y));

  CountingConstraint vacuous =
      translate_max_to_min(cc("V", Player::Ego, CcKind::Max, ActionFormula::atom(y), 4, 4));
  CHECK(vacuous.bound == 0);
  CHECK(vacuous.window == 4);

  CountingConstraint never =
      translate_max_to_min(cc("N", Player::Ego, CcKind::Max, ActionFormula::atom(y), 0, 4));
  CHECK(never.bound == 4);
  CHECK(never.window == 4);

  CHECK_THROWS_AS(
      translate_max_to_min(cc("M", Player::Ego, CcKind::Min, ActionFormula::atom(y), 1, 2)),
      InputError);
  CHECK_THROWS_AS(
      translate_max_to_min(cc("A", Player::Adv, CcKind::Max, ActionFormula::atom(y), 1, 2)),
      InputError);
}

TEST_CASE("window_satisfied counting rules") {
  CHECK(window_satisfied(marks("110"), 2, CcKind::Max));        // two hits within budget
  CHECK_FALSE(window_satisfied(marks("111"), 2, CcKind::Max));  // three hits exceed it
  CHECK(window_satisfied(marks("nnn"), 3, CcKind::Min));        // open turns count for Min
  CHECK(window_satisfied(marks("nnn"), 0, CcKind::Max));        // but not against Max
  CHECK(window_satisfied(marks("1nn"), 2, CcKind::Min));
  CHECK_FALSE(window_satisfied(marks("00n"), 2, CcKind::Min));
  CHECK_THROWS_AS(window_satisfied({}, 0, CcKind::Min), InputError);
  CHECK_THROWS_AS(window_satisfied(marks("n1"), 1, CcKind::Min), InputError);  // gap in suffix
}

TEST_CASE("monitor golden: the periodic small-arena play satisfies all four constraints") {
  ParsedGame game = load_game("small_arena.game");
  // two periods of (1 y 2 a 3 x 2 a 3 {x y} 4 a)^w
  Prefix two_periods = make_prefix(
      game.graph, {"1", "y", "2", "a", "3", "x", "2", "a", "3", "x y", "4", "a",
                   "1", "y", "2", "a", "3", "x", "2", "a", "3", "x y", "4", "a", "1"});
  auto verdicts = monitor_prefix(two_periods, game.constraints, game.graph);
  REQUIRE(verdicts.size() == 4);
  for (const auto& [id, v] : verdicts) {
    INFO(id);
    CHECK(v.status == CcStatus::SatisfiableSoFar);
  }
}

TEST_CASE("monitor golden: five y-free ego turns violate the min-y constraint") {
  ParsedGame game = load_game("small_arena.game");
  // ego avoids y: 1 -x-> 4 -b-> 3 -x-> 2 -a-> 3 -x-> 2 -a-> 3 -x-> 2 -a-> 3 -x-> 2
  Prefix prefix = make_prefix(game.graph, {"1", "x", "4", "b", "3", "x", "2", "a", "3", "x",
                                           "2", "a", "3", "x", "2", "a", "3", "x", "2"});
  auto verdicts = monitor_prefix(prefix, game.constraints, game.graph);
  CHECK(verdicts.at("C2").status == CcStatus::Violated);
  CHECK(verdicts.at("C2").window_begin == 1);
  CHECK(verdicts.at("C2").window_end == 5);
  // the x-heavy walk satisfies the other three
  CHECK(verdicts.at("C1").status == CcStatus::SatisfiableSoFar);
  CHECK(verdicts.at("C3").status == CcStatus::SatisfiableSoFar);
  CHECK(verdicts.at("C4").status == CcStatus::SatisfiableSoFar);
}

TEST_CASE("monitor flags a trailing partial window that already exceeds a Max bound") {
  // three hits in a row can no longer fit under "at most 2 out of 4"
  CHECK(bits_satisfiable({true, true}, 2, 4, CcKind::Max));
  CHECK_FALSE(bits_satisfiable({true, true, true}, 2, 4, CcKind::Max));
  // matches the honest completion-based oracle
  CHECK_FALSE(oracle::prefix_satisfiable({true, true, true}, 2, 4, CcKind::Max));
}

TEST_CASE("monitor agrees with the completion oracle on every short bit sequence") {
  for (uint32_t l = 1; l <= 5; ++l) {
    for (uint32_t k = 0; k <= l; ++k) {
      for (uint32_t len = 0; len <= 10; ++len) {
        for (uint32_t word = 0; word < (1u << len); ++word) {
          std::vector<bool> bits;
          for (uint32_t i = 0; i < len; ++i) bits.push_back((word >> i) & 1);
          bool min_m = bits_satisfiable(bits, k, l, CcKind::Min);
          bool max_m = bits_satisfiable(bits, k, l, CcKind::Max);
          if (min_m != oracle::prefix_satisfiable(bits, k, l, CcKind::Min) ||
              max_m != oracle::prefix_satisfiable(bits, k, l, CcKind::Max)) {
            CAPTURE(k);
            CAPTURE(l);
            CAPTURE(word);
            REQUIRE(false);
          }
        }
      }
    }
  }
}

TEST_CASE("translation equivalence: Max(k,l) on bits equals Min(l-k,l) on complemented bits") {
  for (uint32_t l = 1; l <= 6; ++l) {
    for (uint32_t k = 0; k <= l; ++k) {
      for (uint32_t len = 1; len <= 12; ++len) {
        for (uint32_t word = 0; word < (1u << len); ++word) {
          std::vector<bool> bits, flipped;
          for (uint32_t i = 0; i < len; ++i) {
            bits.push_back((word >> i) & 1);
            flipped.push_back(!bits.back());
          }
          if (bits_satisfiable(bits, k, l, CcKind::Max) !=
              bits_satisfiable(flipped, l - k, l, CcKind::Min)) {
            CAPTURE(k);
            CAPTURE(l);
            CAPTURE(word);
            REQUIRE(false);
          }
        }
      }
    }
  }
}

TEST_CASE("Min windows are monotone in the length on periodic plays") {
  // a periodic turn sequence satisfying Min(k,l) also satisfies Min(k,l+1)
  for (uint32_t period = 1; period <= 8; ++period) {
    for (uint32_t word = 0; word < (1u << period); ++word) {
      std::vector<bool> bits;
      for (uint32_t rep = 0; rep < 6; ++rep)
        for (uint32_t i = 0; i < period; ++i) bits.push_back((word >> i) & 1);
      for (uint32_t l = 1; l <= 6; ++l) {
        for (uint32_t k = 0; k <= l; ++k) {
          if (bits_satisfiable(bits, k, l, CcKind::Min))
            CHECK(bits_satisfiable(bits, k, l + 1, CcKind::Min));
        }
      }
    }
  }
}

TEST_CASE("violations are absorbing under extension") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    uint32_t l = 1 + static_cast<uint32_t>(rng.below(4));
    uint32_t k = static_cast<uint32_t>(rng.below(l + 1));
    CcKind kind = rng.below(2) ? CcKind::Min : CcKind::Max;
    std::vector<bool> bits;
    for (uint32_t i = 0; i < 6 + rng.below(6); ++i) bits.push_back(rng.below(2));

    Alphabet alpha;
    uint32_t a = alpha.add("a", Player::Ego);
    ConstraintMonitor monitor({cc("C", Player::Ego, kind, ActionFormula::atom(a), k, l)}, alpha);
    bool violated = false;
    for (bool hit : bits) {
      monitor.step(Player::Ego, hit ? (1u << a) : 0);
      bool now = monitor.verdict(0).violated();
      CHECK((!violated || now));  // once violated, stays violated
      violated = now;
    }
  }
}

TEST_CASE("monitor only reacts to the owning player's turns") {
  ParsedGame game = load_game("small_arena.game");
  Prefix prefix = make_prefix(game.graph, {"1", "y", "2", "a", "3"});
  // C4 belongs to the adversary: a single adversary turn played a
  auto verdicts = monitor_prefix(prefix, game.constraints, game.graph);
  CHECK(verdicts.at("C4").status == CcStatus::SatisfiableSoFar);

  ConstraintMonitor monitor(game.constraints, game.graph.alphabet());
  monitor.step(Player::Ego, action(game.graph, "y"));
  CHECK(monitor.history(3) == marks("nn"));  // C4 untouched by an ego turn
  monitor.step(Player::Adv, action(game.graph, "c"));
  CHECK(monitor.history(3) == marks("0n"));
  CHECK(monitor.move_keeps_satisfiable(Player::Adv, action(game.graph, "b")));
  CHECK_FALSE(monitor.move_keeps_satisfiable(Player::Adv, action(game.graph, "c")));
}

TEST_CASE("prefix outside the graph is rejected") {
  ParsedGame game = load_game("small_arena.game");
  Prefix bad = make_prefix(game.graph, {"1", "x", "2"});
  CHECK_THROWS_AS(monitor_prefix(bad, game.constraints, game.graph), InputError);
}
