#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "countsynth/bitset.hpp"
#include "countsynth/situation.hpp"

namespace countsynth {

inline constexpr ActionSet kNoAction = UINT32_MAX;

// Positional strategy fragment: per node the chosen action and successor,
// kNoAction / -1 where undefined. Equally good moves are broken towards the
// smallest action mask, so solver output is reproducible.
struct Strategy {
  std::vector<ActionSet> action;
  std::vector<int32_t> succ;

  explicit Strategy(size_t n = 0) : action(n, kNoAction), succ(n, -1) {}
  bool defined(uint32_t n) const { return action[n] != kNoAction; }
};

struct AttractorResult {
  Bitset set;
  Strategy strategy;  // for the attracting player, on set minus target
};

// Least set containing `target` from which player p can force a visit to
// `target`. When `subgame` is given, only nodes and edges inside it count.
// The strategy follows edges of decreasing attractor rank.
AttractorResult attractor(const SituationGraph& sg, const Bitset& target, Player p,
                          const Bitset* subgame = nullptr);

// Winning region of EGO in a lifted game, with a positional strategy that
// wins from every region node.
struct Region {
  Bitset situations;
  Strategy strategy;
  // Reachability only: nodes outside the winning region that the strategy
  // may visit after the target has been reached (it then plays the
  // constraint-safe game). Empty for all other conditions.
  Bitset support;

  uint32_t interior_size(const SituationGraph& sg) const;
};

Region solve_lifted(const LiftedGame& game);

// Region from which player p can visit `accepting` infinitely often.
// Exposed for the dual co-Buchi route and for solver cross-checks.
Bitset buchi_region(const SituationGraph& sg, const Bitset& accepting, Player p,
                    const Bitset* subgame = nullptr);

struct ZielonkaResult {
  Bitset ego;
  Bitset adv;
  Strategy ego_strategy;
  Strategy adv_strategy;
};

// Recursive parity solver; the winner of a play is decided by the parity of
// the smallest color occurring infinitely often (even favors EGO).
ZielonkaResult zielonka(const SituationGraph& sg, std::span<const uint32_t> colors);

}  // namespace countsynth
