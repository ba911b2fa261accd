#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "countsynth/formula.hpp"
#include "countsynth/game.hpp"
#include "countsynth/types.hpp"

namespace countsynth {

enum class CcKind : uint8_t { Min, Max };

// Window counting constraint: the owning player must satisfy `formula` at
// least (Min) or at most (Max) `bound` times in every window of `window`
// consecutive own turns.
struct CountingConstraint {
  std::string id;
  Player player = Player::Ego;
  CcKind kind = CcKind::Min;
  ActionFormula formula;
  uint32_t bound = 0;   // k
  uint32_t window = 1;  // l, counted in own turns

  bool is_ego_min() const { return player == Player::Ego && kind == CcKind::Min; }

  // Throws InputError for bound > window, window == 0, or formula atoms
  // outside the owning player's alphabet.
  void check(const Alphabet& alphabet) const;

  std::string describe(const Alphabet& alphabet) const;
};

// Rewrites an EGO Max constraint into the equivalent Min form: playing
// `formula` at most k times out of l is playing its negation at least l-k
// times out of l. The result carries a derived id linked to the original.
CountingConstraint translate_max_to_min(const CountingConstraint& c);

// One history entry: None marks an own turn that has not happened yet.
// None entries always form a suffix of a history vector.
enum class Mark : uint8_t { None = 0, Zero = 1, One = 2 };

char mark_char(Mark m);

// Window check on a history vector (most recent turn first). Min counts a
// None entry optimistically (the missing turns could still satisfy the
// formula); Max counts only explicit One entries, so a fresh history never
// violates a Max constraint.
bool window_satisfied(std::span<const Mark> entries, uint32_t bound, CcKind kind);

enum class CcStatus : uint8_t { SatisfiableSoFar, Violated };

struct WindowVerdict {
  CcStatus status = CcStatus::SatisfiableSoFar;
  // For Violated: 1-based own-turn indices of the witnessing window.
  uint32_t window_begin = 0;
  uint32_t window_end = 0;

  bool violated() const { return status == CcStatus::Violated; }
};

// Incremental sliding-window monitor over one play. Feed every move in
// order; each constraint tracks its owner's turns only. A constraint is
// Violated as soon as no infinite continuation could satisfy it: a Min
// constraint when a completed window has too few hits or the trailing
// partial window can no longer reach the bound, a Max constraint when any
// window already exceeds the bound. Violated is sticky.
class ConstraintMonitor {
 public:
  ConstraintMonitor(std::vector<CountingConstraint> constraints, const Alphabet& alphabet);

  void step(Player mover, ActionSet act);

  // True if the given move would leave every constraint owned by `mover`
  // satisfiable. Does not advance.
  bool move_keeps_satisfiable(Player mover, ActionSet act) const;

  size_t size() const { return constraints_.size(); }
  const CountingConstraint& constraint(size_t i) const { return constraints_[i]; }
  const WindowVerdict& verdict(size_t i) const { return verdicts_[i]; }
  bool all_satisfiable() const;

  // Current history vector of constraint i, most recent own turn first,
  // None-padded to the window length.
  std::vector<Mark> history(size_t i) const;

 private:
  struct Track {
    std::vector<Mark> window;  // ring buffer, logically most-recent-first
    uint32_t head = 0;         // slot of the most recent entry
    uint64_t turns = 0;        // own turns seen so far
  };

  void push(size_t i, bool hit);

  std::vector<CountingConstraint> constraints_;
  std::vector<Track> tracks_;
  std::vector<WindowVerdict> verdicts_;
};

// Monitors a prefix of a play on g against the given constraints.
// Returns the verdict per constraint id.
std::map<std::string, WindowVerdict> monitor_prefix(const Prefix& prefix,
                                                    const std::vector<CountingConstraint>& constraints,
                                                    const GameGraph& g);

}  // namespace countsynth
