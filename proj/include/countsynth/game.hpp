#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "countsynth/bitset.hpp"
#include "countsynth/formula.hpp"
#include "countsynth/types.hpp"

namespace countsynth {

struct CountingConstraint;

// Letter table shared by both players. Letter names are unique across the
// two alphabets, so an action set can be stored as one global bitmask and a
// transition labeled with a foreign letter stays representable (it is then
// reported as an alphabet-restriction violation, not a parse failure).
class Alphabet {
 public:
  uint32_t add(const std::string& name, Player owner);

  std::optional<uint32_t> find(std::string_view name) const;
  uint32_t size() const { return static_cast<uint32_t>(names_.size()); }
  const std::string& name(uint32_t letter) const { return names_[letter]; }
  Player owner(uint32_t letter) const { return owners_[letter]; }
  ActionSet player_mask(Player p) const { return masks_[p == Player::Ego ? 0 : 1]; }

  std::vector<std::string> letters(Player p) const;

  // Space-separated letter names in table order; empty string for the empty set.
  std::string action_text(ActionSet act) const;

 private:
  std::vector<std::string> names_;
  std::vector<Player> owners_;
  ActionSet masks_[2] = {0, 0};
  std::unordered_map<std::string, uint32_t> index_;
};

// Two-player turn-based arena: bipartite states, per-player alphabets,
// deterministic labeled transitions. The structural requirements are not
// enforced during construction; validate_graph reports every violation.
class GameGraph {
 public:
  struct Edge {
    ActionSet action;
    StateId to;
  };

  StateId add_state(const std::string& name, Player owner);
  void set_initial(StateId s);
  void add_transition(StateId from, ActionSet action, StateId to);

  // Sorts adjacency by action mask and freezes the graph. Duplicate
  // (from, action, to) triples collapse; conflicting targets are kept so
  // that validate_graph can report them.
  void seal();

  uint32_t state_count() const { return static_cast<uint32_t>(owners_.size()); }
  Player owner(StateId s) const { return owners_[s]; }
  const std::string& state_name(StateId s) const { return names_[s]; }
  std::optional<StateId> find_state(std::string_view name) const;
  StateId initial() const { return initial_; }
  bool has_initial() const { return initial_ != kNoState; }

  Alphabet& alphabet() { return alphabet_; }
  const Alphabet& alphabet() const { return alphabet_; }

  std::span<const Edge> out(StateId s) const;
  std::optional<StateId> successor(StateId from, ActionSet action) const;
  uint32_t transition_count() const { return static_cast<uint32_t>(edges_.size()); }

  std::string describe_transition(StateId from, ActionSet action, StateId to) const;

 private:
  std::vector<std::string> names_;
  std::vector<Player> owners_;
  std::unordered_map<std::string, StateId> index_;
  StateId initial_ = kNoState;
  Alphabet alphabet_;

  std::vector<std::vector<Edge>> pending_;
  std::vector<uint32_t> offsets_;
  std::vector<Edge> edges_;
  bool sealed_ = false;
};

enum class WinKind : uint8_t { Safety, Reachability, Buchi, CoBuchi, Parity };

const char* win_kind_name(WinKind kind);

struct WinningCondition {
  WinKind kind = WinKind::Safety;
  Bitset states;                   // the distinguished state set R; unused for parity
  std::vector<uint32_t> coloring;  // parity only, one color per state

  void check(const GameGraph& g) const;  // throws InputError on mismatch
};

// Finite play prefix: a start state and the following (action, state) steps.
struct Prefix {
  struct Step {
    ActionSet action;
    StateId to;
  };
  StateId start = kNoState;
  std::vector<Step> steps;

  size_t length_in_states() const { return steps.size() + 1; }
  StateId tail() const { return steps.empty() ? start : steps.back().to; }
};

// Throws InputError if the prefix does not follow transitions of g.
// from_initial additionally requires the prefix to start at g.initial().
void validate_prefix(const GameGraph& g, const Prefix& prefix, bool from_initial = false);

struct Violation {
  std::string rule;
  std::string witness;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  std::string summary() const;
};

// Rule names used in validation reports.
namespace rules {
inline constexpr const char* kBipartition = "Bipartition";
inline constexpr const char* kDeadlock = "Absence of deadlock";
inline constexpr const char* kAlphabet = "Alphabet restriction";
inline constexpr const char* kDeterminacy = "Determinacy";
inline constexpr const char* kInitialOwner = "Initial state owner";
inline constexpr const char* kRationality = "Adversary rationality";
}  // namespace rules

// Checks the structural arena conditions plus EGO ownership of the initial
// state. Violations are data; the call itself does not fail.
ValidationReport validate_graph(const GameGraph& g);

// Checks that the adversary can never be forced to violate its own counting
// constraints: every reachable adversary situation (state plus adversary
// constraint histories) that still satisfies all adversary constraints must
// have a successor that also satisfies them. Constraints of EGO are ignored.
ValidationReport validate_rationality(const GameGraph& g,
                                      const std::vector<CountingConstraint>& constraints);

// Truth value of f when exactly the letters of act are played. Both the
// action set and the formula atoms must stay within alphabet_mask.
bool eval_formula(ActionSet act, const ActionFormula& f, ActionSet alphabet_mask);

}  // namespace countsynth
