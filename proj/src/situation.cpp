#include "countsynth/situation.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace countsynth {

namespace {
constexpr uint64_t kLowBits = 0x5555555555555555ULL;  // bit 0 of every entry
}

HistoryLayout::HistoryLayout(std::span<const ConstraintInstance> instances) {
  slots_.reserve(instances.size());
  uint32_t word = 0;
  for (const ConstraintInstance& inst : instances) {
    if (inst.length == 0) throw InputError("history layout: zero window length");
    uint32_t wc = (2 * inst.length + 63) / 64;
    slots_.push_back({word, wc, inst.length});
    word += wc;
  }
  words_ = word;
}

void HistoryLayout::clear(std::span<uint64_t> h) const {
  std::fill(h.begin(), h.end(), 0);  // all-none is the zero encoding
}

void HistoryLayout::push(std::span<uint64_t> h, uint32_t c, bool one) const {
  const Slot& s = slots_[c];
  uint64_t carry = one ? 0b10 : 0b01;
  for (uint32_t w = 0; w < s.word_count; ++w) {
    uint64_t& word = h[s.word + w];
    uint64_t next = word >> 62;
    word = (word << 2) | carry;
    carry = next;
  }
  uint32_t used = 2 * s.length - 64 * (s.word_count - 1);
  if (used < 64) h[s.word + s.word_count - 1] &= (uint64_t{1} << used) - 1;
}

Mark HistoryLayout::entry(std::span<const uint64_t> h, uint32_t c, uint32_t i) const {
  const Slot& s = slots_[c];
  assert(i < s.length);
  uint64_t code = (h[s.word + (2 * i) / 64] >> ((2 * i) % 64)) & 3;
  return code == 0 ? Mark::None : code == 1 ? Mark::Zero : Mark::One;
}

std::vector<Mark> HistoryLayout::entries(std::span<const uint64_t> h, uint32_t c) const {
  std::vector<Mark> out(slots_[c].length);
  for (uint32_t i = 0; i < slots_[c].length; ++i) out[i] = entry(h, c, i);
  return out;
}

bool HistoryLayout::satisfied(std::span<const uint64_t> h, uint32_t c, uint32_t bound,
                              CcKind kind) const {
  const Slot& s = slots_[c];
  uint32_t ones = 0, zeros = 0;
  for (uint32_t w = 0; w < s.word_count; ++w) {
    uint64_t word = h[s.word + w];
    zeros += std::popcount(word & kLowBits);
    ones += std::popcount((word >> 1) & kLowBits);
  }
  if (kind == CcKind::Min) {
    uint32_t nones = s.length - ones - zeros;
    return ones + nones >= bound;
  }
  return ones <= bound;
}

std::string HistoryLayout::text(std::span<const uint64_t> h, uint32_t c) const {
  std::string out = "(";
  for (uint32_t i = 0; i < slots_[c].length; ++i) {
    if (i) out += ',';
    out += mark_char(entry(h, c, i));
  }
  return out + ")";
}

void update_history(const HistoryLayout& layout, std::span<const ConstraintInstance> instances,
                    std::span<uint64_t> h, Player mover, ActionSet act) {
  for (uint32_t c = 0; c < instances.size(); ++c) {
    const CountingConstraint* base = instances[c].base;
    if (base->player != mover) continue;
    layout.push(h, c, base->formula.eval(act));
  }
}

std::span<const uint64_t> SituationGraph::history(uint32_t n) const {
  return {pool_.data() + size_t{n} * layout_.words(), layout_.words()};
}

std::span<const SituationGraph::Edge> SituationGraph::out(uint32_t n) const {
  return {edges_.data() + offsets_[n], edges_.data() + offsets_[n + 1]};
}

std::span<const uint32_t> SituationGraph::in(uint32_t n) const {
  return {in_edges_.data() + in_offsets_[n], in_edges_.data() + in_offsets_[n + 1]};
}

int64_t SituationGraph::redirect(uint32_t n) const {
  auto it = std::lower_bound(redirects_.begin(), redirects_.end(), n,
                             [](const auto& p, uint32_t v) { return p.first < v; });
  return it != redirects_.end() && it->first == n ? it->second : -1;
}

bool SituationGraph::situation_satisfies(uint32_t n, uint32_t constraint) const {
  if (is_sink(n)) throw InputError("situation_satisfies: sink states carry no history");
  if (constraint >= instances_.size())
    throw InputError("situation_satisfies: no history vector for this constraint");
  const CountingConstraint* base = instances_[constraint].base;
  return layout_.satisfied(history(n), constraint, base->bound, base->kind);
}

std::string SituationGraph::situation_text(const GameGraph& g, uint32_t n) const {
  static const char* sink_names[4] = {"wE", "wA", "lE", "lA"};
  for (int t = 0; t < 4; ++t)
    if (sinks_[t] == n) return std::string("(") + sink_names[t] + ", .)";
  std::string out = "(" + g.state_name(states_[n]);
  for (uint32_t c = 0; c < instances_.size(); ++c) {
    out += ", ";
    out += instances_[c].base->id + "=" + layout_.text(history(n), c);
  }
  return out + ")";
}

std::string SituationGraph::dump(const GameGraph& g) const {
  std::ostringstream os;
  os << "situation-graph nodes " << size() << " interior " << interior_count_ << " edges "
     << edge_count() << "\n";
  for (uint32_t n = 0; n < size(); ++n) {
    os << n << ' ' << situation_text(g, n) << ' ' << (owner(n) == Player::Ego ? "ego" : "adv");
    switch (flags_[n]) {
      case SitFlag::Normal: break;
      case SitFlag::ToWinSink: os << " to-win-sink"; break;
      case SitFlag::ToLoseSink: os << " to-lose-sink"; break;
      case SitFlag::Sink: os << " sink"; break;
    }
    os << '\n';
  }
  for (uint32_t n = 0; n < size(); ++n)
    for (const Edge& e : out(n))
      os << n << " -[" << g.alphabet().action_text(e.action) << "]-> " << e.to << '\n';
  return os.str();
}

namespace {

// Builder-side interning of (state, packed history) pairs. Keys are node
// indices into the growing pool; the sentinel key addresses the probe
// buffer, so lookups allocate nothing.
class SituationInterner {
 public:
  static constexpr uint32_t kProbe = UINT32_MAX;

  SituationInterner(std::vector<StateId>& states, std::vector<uint64_t>& pool, uint32_t words)
      : states_(states), pool_(pool), words_(words), set_(16, Hash{this}, Eq{this}) {}

  std::span<uint64_t> probe_buffer() { return probe_hist_; }
  void begin_probe(StateId state) {
    probe_state_ = state;
    probe_hist_.assign(words_, 0);
  }

  // Interns the probe buffer; returns (node, inserted).
  std::pair<uint32_t, bool> intern() {
    auto it = set_.find(kProbe);
    if (it != set_.end()) return {*it, false};
    uint32_t node = static_cast<uint32_t>(states_.size());
    states_.push_back(probe_state_);
    pool_.insert(pool_.end(), probe_hist_.begin(), probe_hist_.end());
    set_.insert(node);
    return {node, true};
  }

 private:
  StateId state_of(uint32_t key) const { return key == kProbe ? probe_state_ : states_[key]; }
  std::span<const uint64_t> hist_of(uint32_t key) const {
    if (key == kProbe) return probe_hist_;
    return {pool_.data() + size_t{key} * words_, words_};
  }

  struct Hash {
    SituationInterner* self;
    size_t operator()(uint32_t key) const {
      size_t h = 1469598103934665603ull ^ self->state_of(key);
      for (uint64_t w : self->hist_of(key)) {
        h = (h ^ (w & 0xffffffff)) * 1099511628211ull;
        h = (h ^ (w >> 32)) * 1099511628211ull;
      }
      return h;
    }
  };
  struct Eq {
    SituationInterner* self;
    bool operator()(uint32_t a, uint32_t b) const {
      if (self->state_of(a) != self->state_of(b)) return false;
      auto ha = self->hist_of(a), hb = self->hist_of(b);
      return std::equal(ha.begin(), ha.end(), hb.begin());
    }
  };

  std::vector<StateId>& states_;
  std::vector<uint64_t>& pool_;
  uint32_t words_;
  StateId probe_state_ = kNoState;
  std::vector<uint64_t> probe_hist_;
  std::unordered_set<uint32_t, Hash, Eq> set_;
};

}  // namespace

class SituationGraphBuilder {
 public:
  SituationGraph run(const GameGraph& g, std::vector<ConstraintInstance> instances,
                     const StoreLookup* store) {
    SituationGraph sg;
    sg.base_states_ = g.state_count();
    sg.instances_ = std::move(instances);
    for (const ConstraintInstance& inst : sg.instances_) {
      inst.base->check(g.alphabet());
      if (inst.length < std::max<uint32_t>(inst.base->bound, 1) || inst.length > inst.base->window)
        throw InputError("situation graph: instance length of " + inst.base->id +
                         " outside [max(k,1), l]");
      if (inst.length != inst.base->window && !inst.base->is_ego_min())
        throw InputError("situation graph: only ego min constraints may be shortened");
    }
    sg.layout_ = HistoryLayout(sg.instances_);
    const HistoryLayout& layout = sg.layout_;
    const uint32_t words = layout.words();

    std::vector<std::vector<SituationGraph::Edge>> adj;
    SituationInterner interner(sg.states_, sg.pool_, words);

    interner.begin_probe(g.initial());
    layout.clear(interner.probe_buffer());
    interner.intern();
    adj.emplace_back();
    sg.flags_.push_back(SitFlag::Normal);

    auto ego_satisfied = [&](std::span<const uint64_t> h) {
      for (uint32_t c = 0; c < sg.instances_.size(); ++c) {
        const CountingConstraint* base = sg.instances_[c].base;
        if (base->player == Player::Ego && !layout.satisfied(h, c, base->bound, base->kind))
          return false;
      }
      return true;
    };
    auto adv_satisfied = [&](std::span<const uint64_t> h) {
      for (uint32_t c = 0; c < sg.instances_.size(); ++c) {
        const CountingConstraint* base = sg.instances_[c].base;
        if (base->player == Player::Adv && !layout.satisfied(h, c, base->bound, base->kind))
          return false;
      }
      return true;
    };

    // Breadth-first expansion; node indices coincide with discovery order,
    // so rebuilding from identical inputs yields an identical graph.
    std::vector<uint64_t> cur(words);
    for (uint32_t n = 0; n < sg.states_.size(); ++n) {
      StateId s = sg.states_[n];
      // Copy out of the pool: interning grows it and invalidates spans.
      std::copy_n(sg.pool_.begin() + size_t{n} * words, words, cur.begin());

      if (store) {
        int64_t hit = store->find(s, layout, cur);
        if (hit >= 0) {
          if (!ego_satisfied(cur))
            throw StateError("situation graph: stored winning situation extended by " +
                             sg.situation_text(g, n) + " violates an ego constraint");
          sg.flags_[n] = SitFlag::ToWinSink;
          sg.redirects_.emplace_back(n, hit);
          continue;
        }
      }
      if (!ego_satisfied(cur)) {
        sg.flags_[n] = SitFlag::ToLoseSink;
        continue;
      }

      Player mover = g.owner(s);
      bool expanded = false;
      for (const GameGraph::Edge& e : g.out(s)) {
        interner.begin_probe(e.to);
        std::span<uint64_t> next = interner.probe_buffer();
        std::copy(cur.begin(), cur.end(), next.begin());
        update_history(layout, sg.instances_, next, mover, e.action);
        if (mover == Player::Adv && !adv_satisfied(next)) continue;
        auto [to, inserted] = interner.intern();
        if (inserted) {
          adj.emplace_back();
          sg.flags_.push_back(SitFlag::Normal);
        }
        adj[n].push_back({e.action, to});
        expanded = true;
      }
      if (!expanded) {
        if (mover == Player::Adv)
          throw StateError(
              "situation graph: adversary situation " + sg.situation_text(g, n) +
              " has no move that keeps its counting constraints satisfiable; the game does "
              "not grant the adversary a compliant move from every reachable situation");
        throw InputError("situation graph: state " + g.state_name(s) +
                         " has no outgoing transition");
      }
    }

    sg.interior_count_ = static_cast<uint32_t>(sg.states_.size());
    sg.owners_.resize(sg.interior_count_);
    for (uint32_t n = 0; n < sg.interior_count_; ++n) sg.owners_[n] = g.owner(sg.states_[n]);

    attach_sinks(sg, adj);

    sg.offsets_.assign(sg.size() + 1, 0);
    for (uint32_t n = 0; n < sg.size(); ++n) {
      sg.offsets_[n] = static_cast<uint32_t>(sg.edges_.size());
      sg.edges_.insert(sg.edges_.end(), adj[n].begin(), adj[n].end());
    }
    sg.offsets_[sg.size()] = static_cast<uint32_t>(sg.edges_.size());

    sg.in_offsets_.assign(sg.size() + 1, 0);
    for (const auto& e : sg.edges_) sg.in_offsets_[e.to + 1]++;
    for (uint32_t n = 0; n < sg.size(); ++n) sg.in_offsets_[n + 1] += sg.in_offsets_[n];
    sg.in_edges_.resize(sg.edges_.size());
    std::vector<uint32_t> fill(sg.in_offsets_.begin(), sg.in_offsets_.end() - 1);
    for (uint32_t n = 0; n < sg.size(); ++n)
      for (const auto& e : adj[n]) sg.in_edges_[fill[e.to]++] = n;

    return sg;
  }

 private:
  void attach_sinks(SituationGraph& sg, std::vector<std::vector<SituationGraph::Edge>>& adj) {
    bool need_win = false, need_lose = false;
    for (uint32_t n = 0; n < sg.interior_count_; ++n) {
      need_win |= sg.flags_[n] == SitFlag::ToWinSink;
      need_lose |= sg.flags_[n] == SitFlag::ToLoseSink;
    }
    auto add_sink_pair = [&](SinkTag ego_tag, SinkTag adv_tag) {
      uint32_t e = static_cast<uint32_t>(sg.states_.size());
      uint32_t a = e + 1;
      for (int i = 0; i < 2; ++i) {
        sg.states_.push_back(kNoState);
        sg.flags_.push_back(SitFlag::Sink);
        sg.pool_.insert(sg.pool_.end(), sg.layout_.words(), 0);
        adj.emplace_back();
      }
      sg.owners_.push_back(Player::Ego);
      sg.owners_.push_back(Player::Adv);
      sg.sinks_[static_cast<size_t>(ego_tag)] = e;
      sg.sinks_[static_cast<size_t>(adv_tag)] = a;
      adj[e].push_back({0, a});
      adj[a].push_back({0, e});
    };
    if (need_win) add_sink_pair(SinkTag::WinEgo, SinkTag::WinAdv);
    if (need_lose) add_sink_pair(SinkTag::LoseEgo, SinkTag::LoseAdv);

    // A flagged situation keeps the bipartition by entering the sink at the
    // state owned by the other player.
    for (uint32_t n = 0; n < sg.interior_count_; ++n) {
      if (sg.flags_[n] == SitFlag::ToWinSink) {
        SinkTag tag = sg.owners_[n] == Player::Ego ? SinkTag::WinAdv : SinkTag::WinEgo;
        adj[n].push_back({0, static_cast<uint32_t>(sg.sinks_[static_cast<size_t>(tag)])});
      } else if (sg.flags_[n] == SitFlag::ToLoseSink) {
        SinkTag tag = sg.owners_[n] == Player::Ego ? SinkTag::LoseAdv : SinkTag::LoseEgo;
        adj[n].push_back({0, static_cast<uint32_t>(sg.sinks_[static_cast<size_t>(tag)])});
      }
    }
  }
};

SituationGraph build_situation_graph(const GameGraph& g,
                                     std::vector<ConstraintInstance> instances,
                                     const StoreLookup* store) {
  if (!g.has_initial()) throw InputError("situation graph: game has no initial state");
  return SituationGraphBuilder().run(g, std::move(instances), store);
}

SituationView situation_view(const SituationGraph& sg, uint32_t n) {
  if (sg.is_sink(n)) throw InputError("situation_view: sink states carry no history");
  SituationView view;
  view.state = sg.state(n);
  auto instances = sg.instances();
  for (uint32_t c = 0; c < instances.size(); ++c) {
    view.constraints.push_back(instances[c].base);
    view.histories.push_back(sg.layout().entries(sg.history(n), c));
  }
  return view;
}

bool is_extension(const SituationView& longer, const SituationView& shorter) {
  if (longer.constraints.size() != shorter.constraints.size())
    throw InputError("is_extension: situations carry different constraint sets");
  // Match constraints by stable id; order may differ between increments.
  std::vector<size_t> match(shorter.constraints.size());
  for (size_t i = 0; i < shorter.constraints.size(); ++i) {
    bool found = false;
    for (size_t j = 0; j < longer.constraints.size(); ++j) {
      if (longer.constraints[j]->id == shorter.constraints[i]->id) {
        match[i] = j;
        found = true;
        break;
      }
    }
    if (!found)
      throw InputError("is_extension: constraint " + shorter.constraints[i]->id +
                       " missing from the other situation");
  }

  if (longer.state != shorter.state) return false;
  for (size_t i = 0; i < shorter.constraints.size(); ++i) {
    const auto& sh = shorter.histories[i];
    const auto& lh = longer.histories[match[i]];
    if (shorter.constraints[i]->is_ego_min()) {
      if (lh.size() < sh.size()) return false;
      if (!std::equal(sh.begin(), sh.end(), lh.begin())) return false;
    } else {
      if (lh != sh) return false;
    }
  }
  return true;
}

LiftedGame lift_winning_condition(const SituationGraph& sg, const WinningCondition& win) {
  LiftedGame lifted;
  lifted.graph = &sg;
  lifted.kind = win.kind;

  if (win.kind == WinKind::Parity) {
    if (win.coloring.size() != sg.base_state_count())
      throw InputError("lift: parity coloring does not cover the graph");
    lifted.colors.assign(sg.size(), 0);
    for (uint32_t n = 0; n < sg.size(); ++n) {
      if (!sg.is_sink(n)) {
        lifted.colors[n] = win.coloring[sg.state(n)];
      } else {
        bool is_win_sink = sg.sink(SinkTag::WinEgo) == n || sg.sink(SinkTag::WinAdv) == n;
        lifted.colors[n] = is_win_sink ? 0 : 1;
      }
    }
    return lifted;
  }

  if (win.states.size() != sg.base_state_count())
    throw InputError("lift: winning-condition state set does not cover the graph");
  lifted.favorable = Bitset(sg.size());
  for (uint32_t n = 0; n < sg.size(); ++n) {
    if (!sg.is_sink(n)) {
      if (win.states.test(sg.state(n))) lifted.favorable.set(n);
    } else if (sg.sink(SinkTag::WinEgo) == n || sg.sink(SinkTag::WinAdv) == n) {
      lifted.favorable.set(n);
    }
  }
  return lifted;
}

}  // namespace countsynth
