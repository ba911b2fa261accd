#pragma once

#include <cstdint>
#include <string>

#include "countsynth/game.hpp"

namespace countsynth {

struct GeneratorParams {
  uint32_t states = 8;  // rounded up to an even split between the players
  uint32_t branching = 2;
  uint32_t ego_letters = 1;
  uint32_t adv_letters = 1;
  uint32_t ego_min_constraints = 1;
  uint32_t ego_max_constraints = 0;
  uint32_t adv_constraints = 0;
  uint32_t max_bound = 2;   // k drawn from [0 or 1, max_bound]
  uint32_t min_window = 1;  // l drawn from [max(k, min_window), max_window]
  uint32_t max_window = 4;
  WinKind kind = WinKind::Safety;
  uint32_t unsafe_percent = 25;  // chance to mark a state unfavorable (safety/cobuchi)
  bool singleton_ego_actions = false;
  uint64_t seed = 1;
};

// Deterministically generates a valid game file: bipartite, deadlock-free,
// deterministic, and rational by construction. Every adversary state keeps
// one transition whose action set satisfies all adversary Min formulas and
// falsifies all adversary Max formulas, so a compliant move always exists;
// the result is re-checked before it is returned. Identical parameters
// yield byte-identical text.
std::string generate_random_game(const GeneratorParams& params);

}  // namespace countsynth
