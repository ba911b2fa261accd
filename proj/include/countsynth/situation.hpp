#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "countsynth/bitset.hpp"
#include "countsynth/constraints.hpp"
#include "countsynth/game.hpp"

namespace countsynth {

// A counting constraint taken at a possibly shortened window length.
// Only EGO Min constraints are ever shortened; everything else stays at the
// full length of its base constraint.
struct ConstraintInstance {
  const CountingConstraint* base = nullptr;
  uint32_t length = 0;
};

// Bit-packed history storage: per constraint a vector over {1, 0, none},
// most recent own turn first, two bits per entry (none=00, 0=01, 1=10).
// One situation occupies a fixed number of 64-bit words.
class HistoryLayout {
 public:
  HistoryLayout() = default;
  explicit HistoryLayout(std::span<const ConstraintInstance> instances);

  uint32_t words() const { return words_; }
  uint32_t count() const { return static_cast<uint32_t>(slots_.size()); }
  uint32_t length(uint32_t c) const { return slots_[c].length; }

  void clear(std::span<uint64_t> h) const;
  // Prepends the newest entry of constraint c and drops the oldest.
  void push(std::span<uint64_t> h, uint32_t c, bool one) const;
  Mark entry(std::span<const uint64_t> h, uint32_t c, uint32_t i) const;
  std::vector<Mark> entries(std::span<const uint64_t> h, uint32_t c) const;
  bool satisfied(std::span<const uint64_t> h, uint32_t c, uint32_t bound, CcKind kind) const;
  std::string text(std::span<const uint64_t> h, uint32_t c) const;  // "(1,0,n)"

 private:
  struct Slot {
    uint32_t word = 0;
    uint32_t word_count = 0;
    uint32_t length = 0;
  };
  std::vector<Slot> slots_;
  uint32_t words_ = 0;
};

// Applies one move to a history: every constraint owned by the mover shifts
// in the truth value of its formula under the played action set.
void update_history(const HistoryLayout& layout, std::span<const ConstraintInstance> instances,
                    std::span<uint64_t> h, Player mover, ActionSet act);

enum class SitFlag : uint8_t {
  Normal,      // expanded, interior situation
  ToWinSink,   // extension of a stored winning situation; only successor is sink W
  ToLoseSink,  // violates an EGO constraint; only successor is sink L
  Sink,        // one of the four sink states themselves
};

enum class SinkTag : uint8_t { WinEgo = 0, WinAdv = 1, LoseEgo = 2, LoseAdv = 3 };

// Resolves whether a fresh situation extends a stored winning situation.
// Returns an opaque non-negative handle on a hit, -1 otherwise.
class StoreLookup {
 public:
  virtual ~StoreLookup() = default;
  virtual int64_t find(StateId state, const HistoryLayout& layout,
                       std::span<const uint64_t> history) const = 0;
};

// Pruned situation graph for one increment: all situations reachable from
// (initial, all-none) without expanding past stored winners or EGO
// violations, excluding situations that violate an adversary constraint,
// plus the two-state win/lose sink components that restore deadlock freedom.
class SituationGraph {
 public:
  struct Edge {
    ActionSet action;
    uint32_t to;
  };

  uint32_t size() const { return static_cast<uint32_t>(states_.size()); }
  uint32_t interior_count() const { return interior_count_; }
  uint32_t sink_count() const { return size() - interior_count_; }
  uint32_t edge_count() const { return static_cast<uint32_t>(edges_.size()); }

  // Base-graph state of node n; kNoState for sink nodes.
  StateId state(uint32_t n) const { return states_[n]; }
  Player owner(uint32_t n) const { return owners_[n]; }
  SitFlag flag(uint32_t n) const { return flags_[n]; }
  bool is_sink(uint32_t n) const { return flags_[n] == SitFlag::Sink; }
  uint32_t initial() const { return 0; }
  uint32_t base_state_count() const { return base_states_; }

  std::span<const uint64_t> history(uint32_t n) const;
  std::span<const Edge> out(uint32_t n) const;
  std::span<const uint32_t> in(uint32_t n) const;  // predecessor node ids

  // Node id of the given sink state, or -1 if that sink is not present.
  int64_t sink(SinkTag tag) const { return sinks_[static_cast<size_t>(tag)]; }

  // Store handle recorded for ToWinSink nodes, -1 elsewhere.
  int64_t redirect(uint32_t n) const;

  const HistoryLayout& layout() const { return layout_; }
  std::span<const ConstraintInstance> instances() const { return instances_; }

  bool situation_satisfies(uint32_t n, uint32_t constraint) const;
  std::string situation_text(const GameGraph& g, uint32_t n) const;  // "(3, C1=(1,0,n))"

  // Canonical text dump, deterministic for identical inputs.
  std::string dump(const GameGraph& g) const;

 private:
  friend class SituationGraphBuilder;

  std::vector<StateId> states_;
  std::vector<Player> owners_;
  std::vector<SitFlag> flags_;
  std::vector<uint64_t> pool_;  // layout_.words() per node
  HistoryLayout layout_;
  std::vector<ConstraintInstance> instances_;
  uint32_t interior_count_ = 0;
  uint32_t base_states_ = 0;
  int64_t sinks_[4] = {-1, -1, -1, -1};
  std::vector<std::pair<uint32_t, int64_t>> redirects_;  // sorted by node

  std::vector<uint32_t> offsets_;
  std::vector<Edge> edges_;
  std::vector<uint32_t> in_offsets_;
  std::vector<uint32_t> in_edges_;
};

// Breadth-first construction. Throws StateError if an adversary situation
// that satisfies all adversary constraints has no compliant successor (the
// rationality requirement on games with counting constraints).
SituationGraph build_situation_graph(const GameGraph& g,
                                     std::vector<ConstraintInstance> instances,
                                     const StoreLookup* store);

// Explicit form of a situation for cross-increment comparisons.
struct SituationView {
  StateId state = kNoState;
  std::vector<const CountingConstraint*> constraints;
  std::vector<std::vector<Mark>> histories;
};

SituationView situation_view(const SituationGraph& sg, uint32_t n);

// True iff `longer` extends `shorter`: same state, same constraints by id,
// every EGO Min history of `shorter` is a prefix of the corresponding
// history of `longer`, and all other constraints agree exactly (length and
// history). Throws InputError when the id sets differ.
bool is_extension(const SituationView& longer, const SituationView& shorter);

// Situation graph plus the winning condition lifted over situations.
struct LiftedGame {
  const SituationGraph* graph = nullptr;
  WinKind kind = WinKind::Safety;
  // Safety: safe set. Reachability: target candidates (restricted to the
  // constraint-safe region when solving). Buchi: accepting. CoBuchi: allowed.
  Bitset favorable;
  std::vector<uint32_t> colors;  // parity only
};

// Lifts the base winning condition: interior situations are classified by
// their base state, sink W is favorable under every condition (color 0),
// sink L never is (color 1). Reachability is handled in two phases by the
// solver: a safety game avoiding sink L first, then reaching the target
// inside its winning region.
LiftedGame lift_winning_condition(const SituationGraph& sg, const WinningCondition& win);

}  // namespace countsynth
