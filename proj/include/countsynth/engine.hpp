#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "countsynth/constraints.hpp"
#include "countsynth/game.hpp"
#include "countsynth/situation.hpp"
#include "countsynth/solver.hpp"

namespace countsynth {

enum class IncrementOrder : uint8_t { Sequential, Alternating };
enum class InitMode : uint8_t { Minimal, SumK };

// Current and target window lengths of the EGO Min constraints that the
// synthesis loop grows. All other constraints stay at full length.
class IncrementSchedule {
 public:
  IncrementSchedule() = default;
  IncrementSchedule(std::vector<uint32_t> start, std::vector<uint32_t> full, IncrementOrder order);

  bool final() const;
  std::span<const uint32_t> current() const { return current_; }
  std::span<const uint32_t> full() const { return full_; }
  IncrementOrder order() const { return order_; }

  // Grows one constraint by one turn: Sequential completes constraints in
  // order, Alternating cycles through the incomplete ones.
  void advance();

 private:
  std::vector<uint32_t> current_;
  std::vector<uint32_t> full_;
  IncrementOrder order_ = IncrementOrder::Sequential;
  int64_t cursor_ = -1;  // index of the constraint grown last (Alternating)
};

// Starting lengths per EGO Min constraint. Minimal starts every window at
// its bound; SumK starts at the sum of all bounds, which is only sound when
// EGO plays exactly one atomic action per turn.
IncrementSchedule initialize_lengths(const std::vector<CountingConstraint>& constraints,
                                     InitMode init, IncrementOrder order, const GameGraph& g);

void advance_lengths(IncrementSchedule& schedule);

// One solved increment, kept alive as long as stored situations or the
// extracted strategy refer to it.
struct IncrementRecord {
  std::vector<uint32_t> lengths;  // per EGO Min constraint, schedule order
  SituationGraph graph;
  Region region;
};

// Antichain of minimal winning situations accumulated across increments,
// each tagged with the positional strategy of its increment. No stored
// situation extends another stored one.
class WinningStore : public StoreLookup {
 public:
  struct Entry {
    std::shared_ptr<IncrementRecord> record;
    uint32_t node;
  };

  // Inserts the winning region of `record`, skipping sink states and
  // situations that extend an already stored winner. Returns the number of
  // situations added.
  size_t insert(const std::shared_ptr<IncrementRecord>& record);

  size_t size() const { return size_; }
  const Entry& entry(int64_t handle) const { return entries_[handle]; }

  int64_t find(StateId state, const HistoryLayout& layout,
               std::span<const uint64_t> history) const override;

 private:
  bool extends_entry(const Entry& stored, const HistoryLayout& layout,
                     std::span<const uint64_t> history) const;

  std::vector<Entry> entries_;
  std::unordered_map<StateId, std::vector<int64_t>> by_state_;
  size_t size_ = 0;
};

// Executable controller: a finite-state transducer over situations. EGO
// states emit the chosen action set; transitions follow situation-graph
// edges; entering an extension of a stored winner continues in the stored
// increment's strategy with the histories truncated to its lengths.
class StrategyMachine {
 public:
  struct State {
    StateId base = kNoState;
    Player owner = Player::Ego;
    ActionSet emit = 0;                                 // EGO states only
    std::vector<std::pair<ActionSet, uint32_t>> edges;  // sorted by action
    std::string note;                                   // lengths + histories, for inspection
  };
  struct Stitch {
    uint32_t state = 0;  // machine state entered by the switch
    std::string from;    // situation in the newer increment
    std::string to;      // stored situation it extends
  };

  uint32_t initial = 0;
  std::vector<State> states;
  std::vector<Stitch> stitches;

  uint32_t size() const { return static_cast<uint32_t>(states.size()); }
  // Successor under the given action; throws StateError if undefined.
  uint32_t step(uint32_t state, ActionSet act) const;
};

// Builds the stitched controller for a winnable outcome.
StrategyMachine extract_strategy(const GameGraph& g,
                                 const std::shared_ptr<IncrementRecord>& final_record,
                                 const WinningStore& store);

struct IncrementRow {
  std::vector<std::pair<std::string, uint32_t>> lengths;
  uint64_t situations = 0;  // interior situations
  uint64_t sink_states = 0;
  uint64_t edges = 0;
  uint64_t region = 0;        // interior situations in the winning region
  uint64_t region_edges = 0;  // edges between interior region situations
  uint64_t store_after = 0;
  double ms = 0.0;
};

struct RunReport {
  std::string mode;  // "incremental" or "direct"
  std::string order;
  std::string init;
  bool translated = false;
  std::string decision;
  std::vector<IncrementRow> increments;
  double total_ms = 0.0;
};

struct SynthesisResult {
  enum class Decision : uint8_t { Winnable, NotWinnable };

  Decision decision = Decision::NotWinnable;
  uint32_t increments_used = 0;
  std::vector<std::pair<std::string, uint32_t>> final_lengths;
  std::optional<StrategyMachine> strategy;  // present iff Winnable
  RunReport report;

  bool winnable() const { return decision == Decision::Winnable; }
};

struct EngineOptions {
  bool translate = true;  // rewrite EGO Max constraints into Min form
  InitMode init = InitMode::Minimal;
  IncrementOrder order = IncrementOrder::Sequential;
};

// The incremental loop: translate, initialize lengths, then per increment
// build the pruned situation graph, lift the winning condition, solve, and
// either stop (initial situation winning) or feed the winning region into
// the store and grow one constraint. The final increment runs at full
// lengths, so a NotWinnable outcome is conclusive.
SynthesisResult run_incremental(const GameGraph& g, const WinningCondition& win,
                                const std::vector<CountingConstraint>& constraints,
                                const EngineOptions& options = {});

// Single increment at full lengths with an empty store; the baseline the
// incremental runs are compared against.
SynthesisResult run_direct(const GameGraph& g, const WinningCondition& win,
                           const std::vector<CountingConstraint>& constraints,
                           const EngineOptions& options = {});

}  // namespace countsynth
