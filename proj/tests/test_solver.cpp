#include "doctest.h"

#include <map>

#include "common.hpp"
#include "countsynth/rng.hpp"
#include "countsynth/generator.hpp"
#include "countsynth/solver.hpp"
#include "oracle.hpp"

using namespace countsynth;
using namespace countsynth::testing;

namespace {

// Arbitrary small arenas become situation graphs directly when there are no
// constraints: nodes are exactly the reachable states.
SituationGraph plain_graph(const GameGraph& g) { return build_situation_graph(g, {}, nullptr); }

GameGraph random_arena(SplitMix64& rng, uint32_t half, uint32_t branching) {
  GameGraph g;
  g.alphabet().add("x", Player::Ego);
  g.alphabet().add("y", Player::Ego);
  g.alphabet().add("a", Player::Adv);
  g.alphabet().add("b", Player::Adv);
  std::vector<StateId> es, as;
  for (uint32_t i = 0; i < half; ++i) es.push_back(g.add_state("e" + std::to_string(i), Player::Ego));
  for (uint32_t i = 0; i < half; ++i) as.push_back(g.add_state("a" + std::to_string(i), Player::Adv));
  g.set_initial(es[0]);
  ActionSet ego_acts[] = {0, action(g, "x"), action(g, "y"), action(g, "x y")};
  ActionSet adv_acts[] = {0, action(g, "a"), action(g, "b"), action(g, "a b")};
  for (uint32_t i = 0; i < half; ++i) {
    uint32_t eb = 1 + static_cast<uint32_t>(rng.below(branching));
    for (uint32_t j = 0; j < eb; ++j)
      g.add_transition(es[i], ego_acts[j], as[rng.below(half)]);
    uint32_t ab = 1 + static_cast<uint32_t>(rng.below(branching));
    for (uint32_t j = 0; j < ab; ++j)
      g.add_transition(as[i], adv_acts[j], es[rng.below(half)]);
  }
  g.seal();
  return g;
}

Bitset random_subset(SplitMix64& rng, size_t size, uint32_t keep_percent) {
  Bitset out(size);
  for (size_t i = 0; i < size; ++i)
    if (rng.chance(keep_percent)) out.set(i);
  return out;
}

LiftedGame make_lifted(const SituationGraph& sg, WinKind kind, Bitset favorable,
                       std::vector<uint32_t> colors = {}) {
  LiftedGame lifted;
  lifted.graph = &sg;
  lifted.kind = kind;
  lifted.favorable = std::move(favorable);
  lifted.colors = std::move(colors);
  return lifted;
}

void check_strategy_closure(const SituationGraph& sg, const Region& region) {
  Bitset certified = region.situations | region.support;
  certified.for_each([&](size_t i) {
    uint32_t n = static_cast<uint32_t>(i);
    if (sg.owner(n) == Player::Ego) {
      REQUIRE(region.strategy.defined(n));
      ActionSet act = region.strategy.action[n];
      bool found = false;
      for (const auto& e : sg.out(n)) {
        if (e.action == act) {
          found = true;
          CHECK(certified.test(e.to));
          CHECK(e.to == static_cast<uint32_t>(region.strategy.succ[n]));
        }
      }
      CHECK(found);
    } else {
      for (const auto& e : sg.out(n)) CHECK(certified.test(e.to));
    }
  });
}

}  // namespace

TEST_CASE("attractor basics") {
  ParsedGame game = load_game("small_arena.game");
  SituationGraph sg = plain_graph(game.graph);

  Bitset all = Bitset(sg.size()).complement();
  CHECK(attractor(sg, all, Player::Ego).set == all);
  CHECK(attractor(sg, Bitset(sg.size()), Player::Ego).set.none());
  CHECK(attractor(sg, Bitset(sg.size()), Player::Adv).set.none());
}

TEST_CASE("attractor equals the backward fixed-point oracle on random arenas") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    GameGraph g = random_arena(rng, 2 + static_cast<uint32_t>(rng.below(3)), 3);
    SituationGraph sg = plain_graph(g);
    Bitset target = random_subset(rng, sg.size(), 30);
    for (Player p : {Player::Ego, Player::Adv}) {
      AttractorResult got = attractor(sg, target, p);
      CHECK(got.set == oracle::attractor_fixpoint(sg, target, p));
      // strategy edges decrease into the attractor
      difference(got.set, target).for_each([&](size_t i) {
        uint32_t n = static_cast<uint32_t>(i);
        if (sg.owner(n) != p) return;
        REQUIRE(got.strategy.defined(n));
        CHECK(got.set.test(static_cast<size_t>(got.strategy.succ[n])));
      });
    }
  }
}

TEST_CASE("chain game attractor with ranks") {
  // e0 -> a0 -> e1 -> a1 -> e0, target {a1}
  GameGraph g;
  g.alphabet().add("x", Player::Ego);
  g.alphabet().add("a", Player::Adv);
  StateId e0 = g.add_state("e0", Player::Ego);
  StateId a0 = g.add_state("a0", Player::Adv);
  StateId e1 = g.add_state("e1", Player::Ego);
  StateId a1 = g.add_state("a1", Player::Adv);
  g.set_initial(e0);
  g.add_transition(e0, 1, a0);
  g.add_transition(a0, 2, e1);
  g.add_transition(e1, 1, a1);
  g.add_transition(a1, 2, e0);
  g.seal();
  SituationGraph sg = plain_graph(g);

  Bitset target(sg.size());
  uint32_t a1_node = 0;
  for (uint32_t n = 0; n < sg.size(); ++n)
    if (sg.state(n) == a1) a1_node = n;
  target.set(a1_node);
  AttractorResult res = attractor(sg, target, Player::Ego);
  CHECK(res.set == oracle::attractor_fixpoint(sg, target, Player::Ego));
  CHECK(res.set.count() == 4);  // the whole ring reaches a1
}

TEST_CASE("solver regions match the fixpoint oracle on random lifted games") {
  SplitMix64 rng(47);
  int done = 0;
  for (int trial = 0; trial < 200; ++trial) {
    GameGraph g = random_arena(rng, 2 + static_cast<uint32_t>(rng.below(4)), 3);
    SituationGraph sg = plain_graph(g);
    WinKind kind = static_cast<WinKind>(rng.below(4));  // parity handled by the lasso test
    Bitset fav = random_subset(rng, sg.size(), 30 + static_cast<uint32_t>(rng.below(50)));
    LiftedGame lifted = make_lifted(sg, kind, fav);
    Region region = solve_lifted(lifted);
    CHECK(region.situations == oracle::region_fixpoint(lifted));
    check_strategy_closure(sg, region);
    done++;
  }
  CHECK(done == 200);
}

TEST_CASE("all five solvers match the exhaustive lasso oracle on tiny games") {
  SplitMix64 rng(53);
  for (int trial = 0; trial < 120; ++trial) {
    GameGraph g = random_arena(rng, 2 + static_cast<uint32_t>(rng.below(2)), 2);
    SituationGraph sg = plain_graph(g);
    WinKind kind = static_cast<WinKind>(rng.below(5));
    Bitset fav = random_subset(rng, sg.size(), 40);
    std::vector<uint32_t> colors;
    for (uint32_t n = 0; n < sg.size(); ++n)
      colors.push_back(static_cast<uint32_t>(rng.below(4)));

    LiftedGame lifted = make_lifted(sg, kind, fav, kind == WinKind::Parity ? colors
                                                                           : std::vector<uint32_t>{});
    Region region = solve_lifted(lifted);
    oracle::LassoOracle lasso{sg, kind, fav, colors};
    Bitset expect = lasso.ego_region();
    if (region.situations != expect) {
      CAPTURE(trial);
      CAPTURE(static_cast<int>(kind));
      REQUIRE(region.situations == expect);
    }
    check_strategy_closure(sg, region);
  }
}

TEST_CASE("determinacy: parity regions partition the nodes") {
  SplitMix64 rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    GameGraph g = random_arena(rng, 2 + static_cast<uint32_t>(rng.below(40)), 3);
    SituationGraph sg = plain_graph(g);
    std::vector<uint32_t> colors;
    for (uint32_t n = 0; n < sg.size(); ++n)
      colors.push_back(static_cast<uint32_t>(rng.below(5)));
    ZielonkaResult res = zielonka(sg, colors);
    CHECK((res.ego & res.adv).none());
    CHECK((res.ego | res.adv) == Bitset(sg.size()).complement());
  }
}

TEST_CASE("determinacy: the recurrence regions partition against the parity solver's halves") {
  SplitMix64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    GameGraph g = random_arena(rng, 2 + static_cast<uint32_t>(rng.below(40)), 3);
    SituationGraph sg = plain_graph(g);
    Bitset fav = random_subset(rng, sg.size(), 35);

    std::vector<uint32_t> buchi_colors(sg.size(), 1);
    fav.for_each([&](size_t i) { buchi_colors[i] = 0; });
    ZielonkaResult split = zielonka(sg, buchi_colors);
    Bitset ego = buchi_region(sg, fav, Player::Ego);
    CHECK(ego == split.ego);
    CHECK(split.adv == ego.complement());

    // the adversary's own recurrence region on the unfavorable set is
    // exactly where ego cannot keep co-buchi(fav)
    Bitset adv_recurs = buchi_region(sg, fav.complement(), Player::Adv);
    Region cob = solve_lifted(make_lifted(sg, WinKind::CoBuchi, fav));
    CHECK(cob.situations == adv_recurs.complement());
  }
}

TEST_CASE("solver agreement: zielonka with two colors equals buchi and co-buchi") {
  SplitMix64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    GameGraph g = random_arena(rng, 2 + static_cast<uint32_t>(rng.below(10)), 3);
    SituationGraph sg = plain_graph(g);
    Bitset fav = random_subset(rng, sg.size(), 40);

    // buchi(fav): color 0 on fav, 1 elsewhere
    std::vector<uint32_t> buchi_colors(sg.size(), 1);
    fav.for_each([&](size_t i) { buchi_colors[i] = 0; });
    CHECK(zielonka(sg, buchi_colors).ego ==
          solve_lifted(make_lifted(sg, WinKind::Buchi, fav)).situations);

    // cobuchi(fav): color 2 on fav, 1 elsewhere
    std::vector<uint32_t> cob_colors(sg.size(), 1);
    fav.for_each([&](size_t i) { cob_colors[i] = 2; });
    CHECK(zielonka(sg, cob_colors).ego ==
          solve_lifted(make_lifted(sg, WinKind::CoBuchi, fav)).situations);
  }
}

TEST_CASE("solver agreement: safety equals the complement of the adversary attractor") {
  SplitMix64 rng(73);
  for (int trial = 0; trial < 40; ++trial) {
    GameGraph g = random_arena(rng, 2 + static_cast<uint32_t>(rng.below(10)), 3);
    SituationGraph sg = plain_graph(g);
    Bitset fav = random_subset(rng, sg.size(), 60);
    Region region = solve_lifted(make_lifted(sg, WinKind::Safety, fav));
    CHECK(region.situations == attractor(sg, fav.complement(), Player::Adv).set.complement());
  }
}

TEST_CASE("zielonka strategies witness their regions") {
  // walk the strategy graph: plays from the ego region, with the adversary
  // playing its own strategy inside its region, stay consistent
  SplitMix64 rng(79);
  for (int trial = 0; trial < 40; ++trial) {
    GameGraph g = random_arena(rng, 2 + static_cast<uint32_t>(rng.below(6)), 2);
    SituationGraph sg = plain_graph(g);
    std::vector<uint32_t> colors;
    for (uint32_t n = 0; n < sg.size(); ++n)
      colors.push_back(static_cast<uint32_t>(rng.below(4)));
    ZielonkaResult res = zielonka(sg, colors);

    for (Player p : {Player::Ego, Player::Adv}) {
      const Bitset& mine = p == Player::Ego ? res.ego : res.adv;
      const Strategy& strat = p == Player::Ego ? res.ego_strategy : res.adv_strategy;
      mine.for_each([&](size_t i) {
        uint32_t n = static_cast<uint32_t>(i);
        if (sg.owner(n) == p) {
          REQUIRE(strat.defined(n));
          CHECK(mine.test(static_cast<size_t>(strat.succ[n])));
        } else {
          // the opponent cannot leave the region
          for (const auto& e : sg.out(n)) CHECK(mine.test(e.to));
        }
      });
    }
  }
}
