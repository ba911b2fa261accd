#include "countsynth/solver.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

namespace countsynth {

uint32_t Region::interior_size(const SituationGraph& sg) const {
  uint32_t n = 0;
  situations.for_each([&](size_t i) {
    if (!sg.is_sink(static_cast<uint32_t>(i))) n++;
  });
  return n;
}

namespace {

bool in_game(const Bitset* subgame, uint32_t n) { return !subgame || subgame->test(n); }

// First out-edge (smallest action mask) whose head lies in `inside`.
bool pick_edge(const SituationGraph& sg, uint32_t n, const Bitset& inside, Strategy& strategy) {
  for (const SituationGraph::Edge& e : sg.out(n)) {
    if (!inside.test(e.to)) continue;
    strategy.action[n] = e.action;
    strategy.succ[n] = static_cast<int32_t>(e.to);
    return true;
  }
  return false;
}

}  // namespace

AttractorResult attractor(const SituationGraph& sg, const Bitset& target, Player p,
                          const Bitset* subgame) {
  AttractorResult result{Bitset(sg.size()), Strategy(sg.size())};
  Bitset& attr = result.set;

  // Opponent nodes join once all their subgame successors have joined.
  std::vector<uint32_t> pending(sg.size(), 0);
  for (uint32_t n = 0; n < sg.size(); ++n) {
    if (!in_game(subgame, n) || sg.owner(n) == p) continue;
    uint32_t degree = 0;
    for (const SituationGraph::Edge& e : sg.out(n))
      if (in_game(subgame, e.to)) degree++;
    pending[n] = degree;
  }

  std::deque<uint32_t> queue;
  target.for_each([&](size_t i) {
    uint32_t n = static_cast<uint32_t>(i);
    if (!in_game(subgame, n)) return;
    attr.set(n);
    queue.push_back(n);
  });

  while (!queue.empty()) {
    uint32_t v = queue.front();
    queue.pop_front();
    for (uint32_t u : sg.in(v)) {
      if (!in_game(subgame, u) || attr.test(u)) continue;
      if (sg.owner(u) == p) {
        attr.set(u);
        // Smallest-action edge into the attractor built so far; every such
        // head has strictly smaller rank than u.
        pick_edge(sg, u, attr, result.strategy);
        queue.push_back(u);
      } else if (pending[u] > 0 && --pending[u] == 0) {
        attr.set(u);
        queue.push_back(u);
      }
    }
  }
  return result;
}

namespace {

Bitset full_set(uint32_t n) { return Bitset(n).complement(); }

// Safety region for player p (keep the play inside `safe` forever) and a
// strategy staying inside it.
struct SafetyOutcome {
  Bitset region;
  Strategy strategy;
};

SafetyOutcome safety_region(const SituationGraph& sg, const Bitset& safe, Player p,
                            const Bitset* subgame = nullptr) {
  Bitset unsafe = subgame ? difference(*subgame, safe) : safe.complement();
  AttractorResult bad = attractor(sg, unsafe, opponent(p), subgame);
  SafetyOutcome out{subgame ? difference(*subgame, bad.set) : bad.set.complement(),
                    Strategy(sg.size())};
  out.region.for_each([&](size_t i) {
    uint32_t n = static_cast<uint32_t>(i);
    if (sg.owner(n) != p) return;
    bool ok = pick_edge(sg, n, out.region, out.strategy);
    assert(ok);
    (void)ok;
  });
  return out;
}

}  // namespace

Bitset buchi_region(const SituationGraph& sg, const Bitset& accepting, Player p,
                    const Bitset* subgame) {
  Bitset sub = subgame ? *subgame : full_set(sg.size());
  while (true) {
    Bitset goal = accepting & sub;
    AttractorResult reach = attractor(sg, goal, p, &sub);
    Bitset lost = difference(sub, reach.set);
    if (lost.none()) return sub;
    AttractorResult removed = attractor(sg, lost, opponent(p), &sub);
    sub.subtract(removed.set);
    if (sub.none()) return sub;
  }
}

namespace {

// Buchi recurrence with a strategy for p: outside the accepting core follow
// the attractor towards it, on accepting nodes take any edge that stays in
// the region (the attractor then forces the next accepting visit).
struct BuchiOutcome {
  Bitset region;
  Strategy strategy;
};

BuchiOutcome solve_buchi(const SituationGraph& sg, const Bitset& accepting, Player p,
                         const Bitset* subgame = nullptr) {
  BuchiOutcome out{buchi_region(sg, accepting, p, subgame), Strategy(sg.size())};
  if (out.region.none()) return out;
  Bitset goal = accepting & out.region;
  AttractorResult reach = attractor(sg, goal, p, &out.region);
  assert(reach.set == out.region);
  out.strategy = std::move(reach.strategy);
  goal.for_each([&](size_t i) {
    uint32_t n = static_cast<uint32_t>(i);
    if (sg.owner(n) != p) return;
    bool ok = pick_edge(sg, n, out.region, out.strategy);
    assert(ok);
    (void)ok;
  });
  return out;
}

// Co-Buchi solve, following the adversary's recurrence on the forbidden
// nodes from the other side: each round finds the core where EGO can keep
// the play inside `allowed` forever (the complement of the adversary
// attractor to the forbidden nodes), rescues everything EGO can force into
// that core, removes it, and repeats. What survives all rounds is exactly
// the opponent's recurrence region. The strategy descends through the
// rounds and finally circles inside some core, so only finitely many
// forbidden nodes are ever visited.
struct CoBuchiOutcome {
  Bitset region;
  Strategy strategy;
};

CoBuchiOutcome solve_cobuchi(const SituationGraph& sg, const Bitset& allowed) {
  CoBuchiOutcome out{Bitset(sg.size()), Strategy(sg.size())};
  Bitset sub = full_set(sg.size());
  while (sub.any()) {
    Bitset forbidden = difference(sub, allowed);
    AttractorResult to_forbidden = attractor(sg, forbidden, Player::Adv, &sub);
    Bitset core = difference(sub, to_forbidden.set);
    if (core.none()) break;
    AttractorResult rescue = attractor(sg, core, Player::Ego, &sub);

    core.for_each([&](size_t i) {
      uint32_t n = static_cast<uint32_t>(i);
      if (sg.owner(n) != Player::Ego) return;
      bool ok = pick_edge(sg, n, core, out.strategy);
      assert(ok);
      (void)ok;
    });
    difference(rescue.set, core).for_each([&](size_t i) {
      uint32_t n = static_cast<uint32_t>(i);
      if (sg.owner(n) == Player::Ego && rescue.strategy.defined(n)) {
        out.strategy.action[n] = rescue.strategy.action[n];
        out.strategy.succ[n] = rescue.strategy.succ[n];
      }
    });
    out.region |= rescue.set;
    sub.subtract(rescue.set);
  }
  return out;
}

class ZielonkaSolver {
 public:
  ZielonkaSolver(const SituationGraph& sg, std::span<const uint32_t> colors)
      : sg_(sg), colors_(colors), result_{Bitset(sg.size()), Bitset(sg.size()),
                                          Strategy(sg.size()), Strategy(sg.size())} {}

  ZielonkaResult run() {
    Bitset all = full_set(sg_.size());
    auto [ego, adv] = solve(all);
    result_.ego = std::move(ego);
    result_.adv = std::move(adv);
    return std::move(result_);
  }

 private:
  Strategy& strategy_of(Player p) {
    return p == Player::Ego ? result_.ego_strategy : result_.adv_strategy;
  }

  void copy_strategy(Player p, const Strategy& from, const Bitset& on) {
    Strategy& to = strategy_of(p);
    on.for_each([&](size_t i) {
      uint32_t n = static_cast<uint32_t>(i);
      if (sg_.owner(n) == p && from.defined(n)) {
        to.action[n] = from.action[n];
        to.succ[n] = from.succ[n];
      }
    });
  }

  std::pair<Bitset, Bitset> solve(const Bitset& sub) {
    if (sub.none()) return {Bitset(sg_.size()), Bitset(sg_.size())};

    uint32_t min_color = UINT32_MAX;
    sub.for_each([&](size_t i) { min_color = std::min(min_color, colors_[i]); });
    Player p = (min_color % 2 == 0) ? Player::Ego : Player::Adv;
    Player o = opponent(p);

    Bitset pivot(sg_.size());
    sub.for_each([&](size_t i) {
      if (colors_[i] == min_color) pivot.set(static_cast<size_t>(i));
    });

    AttractorResult to_pivot = attractor(sg_, pivot, p, &sub);
    Bitset rest = difference(sub, to_pivot.set);
    auto [ego1, adv1] = solve(rest);
    Bitset& opp_win = (o == Player::Ego) ? ego1 : adv1;

    if (opp_win.none()) {
      // p wins everywhere: recursion strategies stay valid on `rest`,
      // the attractor leads to the pivot, and from pivot nodes any edge
      // inside the subgame keeps the favorite color recurring.
      copy_strategy(p, to_pivot.strategy, difference(to_pivot.set, pivot));
      Strategy stay(sg_.size());
      pivot.for_each([&](size_t i) {
        uint32_t n = static_cast<uint32_t>(i);
        if (sg_.owner(n) != p) return;
        bool ok = pick_edge(sg_, n, sub, stay);
        assert(ok);
        (void)ok;
      });
      copy_strategy(p, stay, pivot);
      return p == Player::Ego ? std::pair{sub, Bitset(sg_.size())}
                              : std::pair{Bitset(sg_.size()), sub};
    }

    AttractorResult escape = attractor(sg_, opp_win, o, &sub);
    copy_strategy(o, escape.strategy, difference(escape.set, opp_win));
    auto [ego2, adv2] = solve(difference(sub, escape.set));
    if (o == Player::Ego)
      return {ego2 | escape.set, std::move(adv2)};
    return {std::move(ego2), adv2 | escape.set};
  }

  const SituationGraph& sg_;
  std::span<const uint32_t> colors_;
  ZielonkaResult result_;
};

Bitset lose_sink_set(const SituationGraph& sg) {
  Bitset s(sg.size());
  if (int64_t le = sg.sink(SinkTag::LoseEgo); le >= 0) s.set(static_cast<size_t>(le));
  if (int64_t la = sg.sink(SinkTag::LoseAdv); la >= 0) s.set(static_cast<size_t>(la));
  return s;
}

Region solve_reachability(const SituationGraph& sg, const Bitset& target_candidates) {
  // Phase 1: the subgame where EGO keeps its constraints satisfiable
  // forever, i.e. avoids sink L.
  SafetyOutcome safe = safety_region(sg, lose_sink_set(sg).complement(), Player::Ego);

  // Phase 2: force a target visit inside that subgame.
  Bitset target = target_candidates & safe.region;
  AttractorResult reach = attractor(sg, target, Player::Ego, &safe.region);

  Region region;
  region.situations = reach.set;
  region.strategy = std::move(reach.strategy);

  // After the target is reached the play continues; from there the strategy
  // only has to stay constraint-safe. Close the strategy over everything
  // that remains reachable this way.
  region.support = Bitset(sg.size());
  std::deque<uint32_t> queue;
  target.for_each([&](size_t i) {
    region.support.set(i);
    queue.push_back(static_cast<uint32_t>(i));
  });
  while (!queue.empty()) {
    uint32_t n = queue.front();
    queue.pop_front();
    if (sg.owner(n) == Player::Ego) {
      if (!region.strategy.defined(n)) {
        region.strategy.action[n] = safe.strategy.action[n];
        region.strategy.succ[n] = safe.strategy.succ[n];
      }
      uint32_t to = static_cast<uint32_t>(region.strategy.succ[n]);
      if (!region.support.test(to) && !region.situations.test(to)) {
        region.support.set(to);
        queue.push_back(to);
      }
    } else {
      for (const SituationGraph::Edge& e : sg.out(n)) {
        if (!safe.region.test(e.to)) continue;
        if (!region.support.test(e.to) && !region.situations.test(e.to)) {
          region.support.set(e.to);
          queue.push_back(e.to);
        }
      }
    }
  }
  region.support.subtract(region.situations);
  return region;
}

}  // namespace

ZielonkaResult zielonka(const SituationGraph& sg, std::span<const uint32_t> colors) {
  if (colors.size() != sg.size()) throw InputError("zielonka: coloring size mismatch");
  return ZielonkaSolver(sg, colors).run();
}

Region solve_lifted(const LiftedGame& game) {
  const SituationGraph& sg = *game.graph;
  Region region;
  switch (game.kind) {
    case WinKind::Safety: {
      SafetyOutcome out = safety_region(sg, game.favorable, Player::Ego);
      region.situations = std::move(out.region);
      region.strategy = std::move(out.strategy);
      break;
    }
    case WinKind::Reachability:
      region = solve_reachability(sg, game.favorable);
      break;
    case WinKind::Buchi: {
      BuchiOutcome out = solve_buchi(sg, game.favorable, Player::Ego);
      region.situations = std::move(out.region);
      region.strategy = std::move(out.strategy);
      break;
    }
    case WinKind::CoBuchi: {
      CoBuchiOutcome out = solve_cobuchi(sg, game.favorable);
      region.situations = std::move(out.region);
      region.strategy = std::move(out.strategy);
      break;
    }
    case WinKind::Parity: {
      ZielonkaResult out = zielonka(sg, game.colors);
      region.situations = std::move(out.ego);
      region.strategy = std::move(out.ego_strategy);
      break;
    }
  }
  if (region.support.size() == 0) region.support = Bitset(sg.size());
  return region;
}

}  // namespace countsynth
