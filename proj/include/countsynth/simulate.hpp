#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "countsynth/constraints.hpp"
#include "countsynth/engine.hpp"
#include "countsynth/game.hpp"

namespace countsynth {

struct SimulationParams {
  uint64_t steps = 1000;  // moves per run (both players together)
  uint64_t runs = 100;
  uint64_t seed = 1;
};

struct RunObservation {
  bool ego_violation = false;
  std::string violated_id;
  uint64_t unsafe_visits = 0;    // states outside R (safety / co-buchi)
  bool target_reached = false;   // some state in R visited (reachability)
  uint64_t max_accept_gap = 0;   // longest stretch without an R visit (buchi)
  uint32_t trailing_min_color = 0;  // smallest color in the trailing window (parity)
};

struct SimulationReport {
  uint64_t runs = 0;
  uint64_t steps = 0;
  uint64_t runs_with_ego_violation = 0;
  uint64_t total_unsafe_visits = 0;
  uint64_t runs_reaching_target = 0;
  uint64_t max_accept_gap = 0;
  std::vector<RunObservation> per_run;

  std::string text() const;
};

// Plays seeded pseudo-random plays: EGO follows the machine, the adversary
// picks uniformly among the moves that keep its own constraints satisfiable
// (tracked at full window lengths; nonempty in a rational game). Every move
// is fed to an independent monitor over the original constraints, and the
// winning-condition observables are collected per run. A machine state
// without a transition for the chosen move is a hard error: the machine
// must be total on everything the certified region can reach.
SimulationReport simulate(const GameGraph& g, const WinningCondition& win,
                          const std::vector<CountingConstraint>& constraints,
                          const StrategyMachine& machine, const SimulationParams& params);

}  // namespace countsynth
