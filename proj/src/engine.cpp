#include "countsynth/engine.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <chrono>

namespace countsynth {

IncrementSchedule::IncrementSchedule(std::vector<uint32_t> start, std::vector<uint32_t> full,
                                     IncrementOrder order)
    : current_(std::move(start)), full_(std::move(full)), order_(order) {
  assert(current_.size() == full_.size());
  for (size_t i = 0; i < current_.size(); ++i) assert(current_[i] <= full_[i]);
}

bool IncrementSchedule::final() const {
  for (size_t i = 0; i < current_.size(); ++i)
    if (current_[i] < full_[i]) return false;
  return true;
}

void IncrementSchedule::advance() {
  if (final()) throw StateError("increment schedule: already at full lengths");
  if (order_ == IncrementOrder::Sequential) {
    for (size_t i = 0; i < current_.size(); ++i) {
      if (current_[i] < full_[i]) {
        current_[i]++;
        return;
      }
    }
  } else {
    size_t n = current_.size();
    for (size_t step = 1; step <= n; ++step) {
      size_t i = (cursor_ + step) % n;
      if (current_[i] < full_[i]) {
        current_[i]++;
        cursor_ = static_cast<int64_t>(i);
        return;
      }
    }
  }
}

IncrementSchedule initialize_lengths(const std::vector<CountingConstraint>& constraints,
                                     InitMode init, IncrementOrder order, const GameGraph& g) {
  if (init == InitMode::SumK) {
    for (StateId s = 0; s < g.state_count(); ++s) {
      if (g.owner(s) != Player::Ego) continue;
      for (const GameGraph::Edge& e : g.out(s))
        if (std::popcount(e.action) != 1)
          throw InputError(
              "initialize_lengths: sum-k start requires ego to play exactly one atomic "
              "action per turn; state " +
              g.state_name(s) + " moves with action set [" +
              g.alphabet().action_text(e.action) + "]");
    }
  }

  uint64_t bound_sum = 0;
  for (const CountingConstraint& c : constraints)
    if (c.is_ego_min()) bound_sum += c.bound;

  std::vector<uint32_t> start, full;
  for (const CountingConstraint& c : constraints) {
    if (!c.is_ego_min()) continue;
    full.push_back(c.window);
    uint32_t minimal = std::max<uint32_t>(c.bound, 1);
    uint32_t s = init == InitMode::Minimal
                     ? minimal
                     : std::max<uint32_t>(minimal,
                                          static_cast<uint32_t>(std::min<uint64_t>(bound_sum, c.window)));
    start.push_back(s);
  }
  return IncrementSchedule(std::move(start), std::move(full), order);
}

void advance_lengths(IncrementSchedule& schedule) { schedule.advance(); }

bool WinningStore::extends_entry(const Entry& stored, const HistoryLayout& layout,
                                 std::span<const uint64_t> history) const {
  const SituationGraph& sgraph = stored.record->graph;
  const HistoryLayout& slayout = sgraph.layout();
  std::span<const uint64_t> shist = sgraph.history(stored.node);
  auto instances = sgraph.instances();
  // Instance order is the constraint input order in every increment, so
  // matching by index realizes matching by stable id.
  for (uint32_t c = 0; c < instances.size(); ++c) {
    uint32_t stored_len = slayout.length(c);
    if (instances[c].base->is_ego_min()) {
      if (layout.length(c) < stored_len) return false;
    } else if (layout.length(c) != stored_len) {
      return false;
    }
    for (uint32_t i = 0; i < stored_len; ++i)
      if (layout.entry(history, c, i) != slayout.entry(shist, c, i)) return false;
  }
  return true;
}

int64_t WinningStore::find(StateId state, const HistoryLayout& layout,
                           std::span<const uint64_t> history) const {
  auto it = by_state_.find(state);
  if (it == by_state_.end()) return -1;
  for (int64_t handle : it->second)
    if (extends_entry(entries_[handle], layout, history)) return handle;
  return -1;
}

size_t WinningStore::insert(const std::shared_ptr<IncrementRecord>& record) {
  const SituationGraph& sg = record->graph;
  size_t added = 0;
  record->region.situations.for_each([&](size_t i) {
    uint32_t n = static_cast<uint32_t>(i);
    if (sg.is_sink(n)) return;
    if (find(sg.state(n), sg.layout(), sg.history(n)) >= 0) return;  // extension of a stored winner
    for (uint32_t c = 0; c < sg.instances().size(); ++c) {
      const CountingConstraint* base = sg.instances()[c].base;
      if (base->player == Player::Ego && !sg.situation_satisfies(n, c))
        throw StateError("winning store: region situation violates an ego constraint");
    }
    int64_t handle = static_cast<int64_t>(entries_.size());
    entries_.push_back({record, n});
    by_state_[sg.state(n)].push_back(handle);
    added++;
    size_++;
  });
  return added;
}

uint32_t StrategyMachine::step(uint32_t state, ActionSet act) const {
  for (const auto& [action, to] : states[state].edges)
    if (action == act) return to;
  throw StateError("strategy machine: no transition from state " + std::to_string(state) +
                   " under action [" + std::to_string(act) + "]");
}

namespace {

std::string lengths_text(std::span<const uint32_t> lengths) {
  std::string out;
  for (size_t i = 0; i < lengths.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(lengths[i]);
  }
  return out.empty() ? "-" : out;
}

// Identity of a machine state: a situation of a specific increment.
struct MachineKey {
  const IncrementRecord* record;
  uint32_t node;
  bool operator==(const MachineKey&) const = default;
};
struct MachineKeyHash {
  size_t operator()(const MachineKey& k) const {
    return std::hash<const void*>()(k.record) * 1099511628211ull ^ k.node;
  }
};

class MachineBuilder {
 public:
  MachineBuilder(const GameGraph& g, const WinningStore& store) : g_(g), store_(store) {}

  StrategyMachine build(const std::shared_ptr<IncrementRecord>& final_record, uint32_t start) {
    machine_.initial = resolve(final_record.get(), start);
    for (uint32_t m = 0; m < machine_.states.size(); ++m) expand(m);
    return std::move(machine_);
  }

 private:
  // Maps a situation to its machine state, following stored-winner
  // redirects first: an extension of a stored situation behaves like the
  // stored situation itself, with the histories truncated to its lengths.
  uint32_t resolve(const IncrementRecord* record, uint32_t node) {
    std::optional<std::pair<std::string, std::string>> stitch;
    while (record->graph.flag(node) == SitFlag::ToWinSink) {
      int64_t handle = record->graph.redirect(node);
      assert(handle >= 0);
      const WinningStore::Entry& entry = store_.entry(handle);
      std::string from = record->graph.situation_text(g_, node);
      record = entry.record.get();
      node = entry.node;
      stitch = {std::move(from), record->graph.situation_text(g_, node)};
    }
    MachineKey key{record, node};
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;

    const SituationGraph& sg = record->graph;
    uint32_t m = static_cast<uint32_t>(machine_.states.size());
    index_.emplace(key, m);
    origin_.push_back(key);
    StrategyMachine::State state;
    state.base = sg.state(node);
    state.owner = sg.owner(node);
    state.note = "lengths=" + lengths_text(record->lengths) + " " + sg.situation_text(g_, node);
    machine_.states.push_back(std::move(state));
    if (stitch) machine_.stitches.push_back({m, stitch->first, stitch->second});
    return m;
  }

  void expand(uint32_t m) {
    MachineKey key = origin_[m];
    const SituationGraph& sg = key.record->graph;
    const Region& region = key.record->region;
    Player owner = machine_.states[m].owner;

    if (owner == Player::Ego) {
      if (!region.strategy.defined(key.node))
        throw StateError("strategy machine: no move chosen for " +
                         sg.situation_text(g_, key.node));
      ActionSet emit = region.strategy.action[key.node];
      uint32_t succ = static_cast<uint32_t>(region.strategy.succ[key.node]);
      uint32_t to = resolve(key.record, succ);
      machine_.states[m].emit = emit;
      machine_.states[m].edges.emplace_back(emit, to);
      return;
    }
    for (const SituationGraph::Edge& e : sg.out(key.node)) {
      if (sg.is_sink(e.to)) continue;
      uint32_t to = resolve(key.record, e.to);
      machine_.states[m].edges.emplace_back(e.action, to);
    }
    if (machine_.states[m].edges.empty())
      throw StateError("strategy machine: adversary state without moves at " +
                       sg.situation_text(g_, key.node));
  }

  const GameGraph& g_;
  const WinningStore& store_;
  StrategyMachine machine_;
  std::unordered_map<MachineKey, uint32_t, MachineKeyHash> index_;
  std::vector<MachineKey> origin_;
};

}  // namespace

StrategyMachine extract_strategy(const GameGraph& g,
                                 const std::shared_ptr<IncrementRecord>& final_record,
                                 const WinningStore& store) {
  const SituationGraph& sg = final_record->graph;
  uint32_t init = sg.initial();
  bool winnable = final_record->region.situations.test(init) ||
                  sg.flag(init) == SitFlag::ToWinSink;
  if (!winnable)
    throw StateError("extract_strategy: the initial situation is not winnable");
  return MachineBuilder(g, store).build(final_record, init);
}

namespace {

uint64_t count_region_edges(const SituationGraph& sg, const Region& region) {
  uint64_t edges = 0;
  region.situations.for_each([&](size_t i) {
    uint32_t n = static_cast<uint32_t>(i);
    if (sg.is_sink(n)) return;
    for (const SituationGraph::Edge& e : sg.out(n))
      if (!sg.is_sink(e.to) && region.situations.test(e.to)) edges++;
  });
  return edges;
}

struct RunContext {
  std::vector<CountingConstraint> constraints;  // after optional translation
  std::vector<size_t> ego_min;                  // indices of incremented constraints
};

RunContext prepare(const GameGraph& g, const WinningCondition& win,
                   const std::vector<CountingConstraint>& constraints, bool translate) {
  ValidationReport graph_report = validate_graph(g);
  if (!graph_report.valid())
    throw InputError("engine: invalid game graph: " + graph_report.summary());
  win.check(g);
  for (const CountingConstraint& c : constraints) c.check(g.alphabet());
  ValidationReport rationality = validate_rationality(g, constraints);
  if (!rationality.valid())
    throw InputError("engine: " + rationality.summary());

  RunContext ctx;
  for (const CountingConstraint& c : constraints) {
    if (translate && c.player == Player::Ego && c.kind == CcKind::Max)
      ctx.constraints.push_back(translate_max_to_min(c));
    else
      ctx.constraints.push_back(c);
  }
  for (size_t i = 0; i < ctx.constraints.size(); ++i)
    if (ctx.constraints[i].is_ego_min()) ctx.ego_min.push_back(i);
  return ctx;
}

SynthesisResult run_loop(const GameGraph& g, const WinningCondition& win, RunContext ctx,
                         IncrementSchedule schedule, const EngineOptions& options,
                         const char* mode) {
  using clock = std::chrono::steady_clock;

  SynthesisResult result;
  result.report.mode = mode;
  result.report.order = options.order == IncrementOrder::Sequential ? "sequential" : "alternating";
  result.report.init = options.init == InitMode::Minimal ? "minimal" : "sum-k";
  result.report.translated = options.translate;

  WinningStore store;
  auto total_start = clock::now();

  while (true) {
    auto start = clock::now();

    std::vector<ConstraintInstance> instances;
    instances.reserve(ctx.constraints.size());
    for (const CountingConstraint& c : ctx.constraints) instances.push_back({&c, c.window});
    for (size_t i = 0; i < ctx.ego_min.size(); ++i)
      instances[ctx.ego_min[i]].length = schedule.current()[i];

    auto record = std::make_shared<IncrementRecord>();
    record->lengths.assign(schedule.current().begin(), schedule.current().end());
    record->graph = build_situation_graph(g, std::move(instances), &store);
    LiftedGame lifted = lift_winning_condition(record->graph, win);
    record->region = solve_lifted(lifted);

    const SituationGraph& sg = record->graph;
    IncrementRow row;
    for (size_t i = 0; i < ctx.ego_min.size(); ++i)
      row.lengths.emplace_back(ctx.constraints[ctx.ego_min[i]].id, schedule.current()[i]);
    row.situations = sg.interior_count();
    row.sink_states = sg.sink_count();
    row.edges = sg.edge_count();
    row.region = record->region.interior_size(sg);
    row.region_edges = count_region_edges(sg, record->region);
    result.increments_used++;

    uint32_t init = sg.initial();
    bool winning = record->region.situations.test(init) || sg.flag(init) == SitFlag::ToWinSink;
    bool last = winning || schedule.final();
    if (!last) store.insert(record);
    row.store_after = store.size();
    row.ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    result.report.increments.push_back(std::move(row));

    if (winning) {
      result.decision = SynthesisResult::Decision::Winnable;
      result.strategy = extract_strategy(g, record, store);
      break;
    }
    if (schedule.final()) {
      result.decision = SynthesisResult::Decision::NotWinnable;
      break;
    }
    schedule.advance();
  }

  for (size_t i = 0; i < ctx.ego_min.size(); ++i)
    result.final_lengths.emplace_back(ctx.constraints[ctx.ego_min[i]].id, schedule.current()[i]);
  result.report.decision = result.winnable() ? "WINNABLE" : "NOT_WINNABLE";
  result.report.total_ms =
      std::chrono::duration<double, std::milli>(clock::now() - total_start).count();
  return result;
}

}  // namespace

SynthesisResult run_incremental(const GameGraph& g, const WinningCondition& win,
                                const std::vector<CountingConstraint>& constraints,
                                const EngineOptions& options) {
  RunContext ctx = prepare(g, win, constraints, options.translate);
  IncrementSchedule schedule =
      initialize_lengths(ctx.constraints, options.init, options.order, g);
  return run_loop(g, win, std::move(ctx), std::move(schedule), options, "incremental");
}

SynthesisResult run_direct(const GameGraph& g, const WinningCondition& win,
                           const std::vector<CountingConstraint>& constraints,
                           const EngineOptions& options) {
  RunContext ctx = prepare(g, win, constraints, options.translate);
  std::vector<uint32_t> full;
  for (size_t i : ctx.ego_min) full.push_back(ctx.constraints[i].window);
  IncrementSchedule schedule(full, full, options.order);
  return run_loop(g, win, std::move(ctx), std::move(schedule), options, "direct");
}

}  // namespace countsynth
