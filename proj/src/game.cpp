#include "countsynth/game.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>

#include "countsynth/constraints.hpp"

namespace countsynth {

uint32_t Alphabet::add(const std::string& name, Player owner) {
  if (name.empty()) throw InputError("alphabet: empty letter name");
  if (index_.count(name))
    throw InputError("alphabet: duplicate letter '" + name + "' (letter names must be unique across both players)");
  if (names_.size() >= kMaxLetters)
    throw InputError("alphabet: at most " + std::to_string(kMaxLetters) + " letters supported");
  uint32_t id = static_cast<uint32_t>(names_.size());
  names_.push_back(name);
  owners_.push_back(owner);
  masks_[owner == Player::Ego ? 0 : 1] |= ActionSet{1} << id;
  index_.emplace(name, id);
  return id;
}

std::optional<uint32_t> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Alphabet::letters(Player p) const {
  std::vector<std::string> out;
  for (uint32_t i = 0; i < size(); ++i)
    if (owners_[i] == p) out.push_back(names_[i]);
  return out;
}

std::string Alphabet::action_text(ActionSet act) const {
  std::string out;
  for (uint32_t i = 0; i < size(); ++i) {
    if (!((act >> i) & 1)) continue;
    if (!out.empty()) out += ' ';
    out += names_[i];
  }
  return out;
}

StateId GameGraph::add_state(const std::string& name, Player owner) {
  if (sealed_) throw StateError("GameGraph: add_state after seal");
  if (name.empty()) throw InputError("game: empty state name");
  if (index_.count(name)) throw InputError("game: duplicate state '" + name + "'");
  StateId id = static_cast<StateId>(names_.size());
  names_.push_back(name);
  owners_.push_back(owner);
  index_.emplace(name, id);
  pending_.emplace_back();
  return id;
}

void GameGraph::set_initial(StateId s) {
  if (s >= state_count()) throw InputError("game: initial state out of range");
  initial_ = s;
}

void GameGraph::add_transition(StateId from, ActionSet action, StateId to) {
  if (sealed_) throw StateError("GameGraph: add_transition after seal");
  if (from >= state_count() || to >= state_count())
    throw InputError("game: transition endpoint out of range");
  pending_[from].push_back(Edge{action, to});
}

void GameGraph::seal() {
  if (sealed_) return;
  offsets_.assign(state_count() + 1, 0);
  for (StateId s = 0; s < state_count(); ++s) {
    auto& edges = pending_[s];
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return a.action != b.action ? a.action < b.action : a.to < b.to;
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const Edge& a, const Edge& b) {
                              return a.action == b.action && a.to == b.to;
                            }),
                edges.end());
    offsets_[s] = static_cast<uint32_t>(edges_.size());
    edges_.insert(edges_.end(), edges.begin(), edges.end());
  }
  offsets_[state_count()] = static_cast<uint32_t>(edges_.size());
  pending_.clear();
  pending_.shrink_to_fit();
  sealed_ = true;
}

std::optional<StateId> GameGraph::find_state(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const GameGraph::Edge> GameGraph::out(StateId s) const {
  assert(sealed_);
  return {edges_.data() + offsets_[s], edges_.data() + offsets_[s + 1]};
}

std::optional<StateId> GameGraph::successor(StateId from, ActionSet action) const {
  for (const Edge& e : out(from))
    if (e.action == action) return e.to;
  return std::nullopt;
}

std::string GameGraph::describe_transition(StateId from, ActionSet action, StateId to) const {
  return state_name(from) + " -[" + alphabet_.action_text(action) + "]-> " + state_name(to);
}

const char* win_kind_name(WinKind kind) {
  switch (kind) {
    case WinKind::Safety: return "safety";
    case WinKind::Reachability: return "reach";
    case WinKind::Buchi: return "buchi";
    case WinKind::CoBuchi: return "cobuchi";
    case WinKind::Parity: return "parity";
  }
  return "?";
}

void WinningCondition::check(const GameGraph& g) const {
  if (kind == WinKind::Parity) {
    if (coloring.size() != g.state_count())
      throw InputError("winning condition: parity coloring must assign a color to every state");
  } else {
    if (states.size() != g.state_count())
      throw InputError("winning condition: state set does not match the graph");
  }
}

void validate_prefix(const GameGraph& g, const Prefix& prefix, bool from_initial) {
  if (prefix.start >= g.state_count()) throw InputError("prefix: start state out of range");
  if (from_initial && prefix.start != g.initial())
    throw InputError("prefix: does not start at the initial state");
  StateId at = prefix.start;
  for (const Prefix::Step& step : prefix.steps) {
    auto next = g.successor(at, step.action);
    if (!next || *next != step.to)
      throw InputError("prefix: no transition " + g.describe_transition(at, step.action, step.to));
    at = step.to;
  }
}

std::string ValidationReport::summary() const {
  if (valid()) return "valid";
  std::ostringstream os;
  for (size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].rule << ": " << violations[i].witness;
  }
  return os.str();
}

ValidationReport validate_graph(const GameGraph& g) {
  ValidationReport report;
  auto add = [&](const char* rule, std::string witness) {
    report.violations.push_back({rule, std::move(witness)});
  };

  for (StateId s = 0; s < g.state_count(); ++s) {
    auto edges = g.out(s);
    if (edges.empty()) add(rules::kDeadlock, "state " + g.state_name(s));
    ActionSet allowed = g.alphabet().player_mask(g.owner(s));
    for (size_t i = 0; i < edges.size(); ++i) {
      const auto& e = edges[i];
      if (g.owner(s) == g.owner(e.to))
        add(rules::kBipartition, g.describe_transition(s, e.action, e.to));
      if (e.action & ~allowed)
        add(rules::kAlphabet, g.describe_transition(s, e.action, e.to));
      if (i + 1 < edges.size() && edges[i + 1].action == e.action)
        add(rules::kDeterminacy,
            "state " + g.state_name(s) + ", action [" + g.alphabet().action_text(e.action) +
                "] leads to both " + g.state_name(e.to) + " and " + g.state_name(edges[i + 1].to));
    }
  }
  if (!g.has_initial()) {
    add(rules::kInitialOwner, "no initial state");
  } else if (g.owner(g.initial()) != Player::Ego) {
    add(rules::kInitialOwner, "initial state " + g.state_name(g.initial()) + " is adversary-owned");
  }
  return report;
}

namespace {

// Key for (state, adversary history) pairs during the rationality check.
struct PairKey {
  StateId state;
  std::vector<Mark> hist;  // concatenated vectors of all adversary constraints
  bool operator==(const PairKey&) const = default;
};

struct PairKeyHash {
  size_t operator()(const PairKey& k) const {
    size_t h = 1469598103934665603ull ^ k.state;
    for (Mark m : k.hist) h = (h ^ static_cast<size_t>(m)) * 1099511628211ull;
    return h;
  }
};

}  // namespace

ValidationReport validate_rationality(const GameGraph& g,
                                      const std::vector<CountingConstraint>& constraints) {
  std::vector<const CountingConstraint*> adv;
  for (const CountingConstraint& c : constraints) {
    c.check(g.alphabet());
    if (c.player == Player::Adv) adv.push_back(&c);
  }

  ValidationReport report;
  if (!g.has_initial() || g.state_count() == 0) return report;

  std::vector<uint32_t> offset(adv.size() + 1, 0);
  for (size_t i = 0; i < adv.size(); ++i) offset[i + 1] = offset[i] + adv[i]->window;

  auto satisfied = [&](const std::vector<Mark>& hist) {
    for (size_t i = 0; i < adv.size(); ++i) {
      std::span<const Mark> slice(hist.data() + offset[i], adv[i]->window);
      if (!window_satisfied(slice, adv[i]->bound, adv[i]->kind)) return false;
    }
    return true;
  };
  auto advance = [&](std::vector<Mark> hist, ActionSet act) {
    for (size_t i = 0; i < adv.size(); ++i) {
      Mark* v = hist.data() + offset[i];
      for (uint32_t j = adv[i]->window - 1; j > 0; --j) v[j] = v[j - 1];
      v[0] = adv[i]->formula.eval(act) ? Mark::One : Mark::Zero;
    }
    return hist;
  };
  auto describe = [&](const PairKey& key) {
    std::string out = "(" + g.state_name(key.state);
    for (size_t i = 0; i < adv.size(); ++i) {
      out += ", ";
      out += adv[i]->id + "=(";
      for (uint32_t j = 0; j < adv[i]->window; ++j) {
        if (j) out += ',';
        out += mark_char(key.hist[offset[i] + j]);
      }
      out += ")";
    }
    return out + ")";
  };

  // Explore (state, adversary histories) pairs along paths on which the
  // adversary keeps all of its constraints satisfiable. EGO moves are
  // unrestricted and leave the histories untouched.
  std::unordered_map<PairKey, uint32_t, PairKeyHash> seen;
  std::deque<PairKey> frontier;
  PairKey init{g.initial(), std::vector<Mark>(offset.back(), Mark::None)};
  seen.emplace(init, 0);
  frontier.push_back(init);

  while (!frontier.empty()) {
    PairKey cur = std::move(frontier.front());
    frontier.pop_front();
    bool is_adv = g.owner(cur.state) == Player::Adv;
    bool has_compliant_move = false;
    for (const GameGraph::Edge& e : g.out(cur.state)) {
      PairKey next{e.to, is_adv ? advance(cur.hist, e.action) : cur.hist};
      if (is_adv && !satisfied(next.hist)) continue;
      has_compliant_move = true;
      if (seen.emplace(next, 0).second) frontier.push_back(next);
    }
    if (is_adv && !has_compliant_move)
      report.violations.push_back(
          {rules::kRationality,
           "adversary situation " + describe(cur) +
               " satisfies all adversary constraints but every move violates one"});
  }
  return report;
}

bool eval_formula(ActionSet act, const ActionFormula& f, ActionSet alphabet_mask) {
  if (f.atoms() & ~alphabet_mask) throw InputError("formula uses a letter outside the alphabet");
  if (act & ~alphabet_mask) throw InputError("action set contains a letter outside the alphabet");
  return f.eval(act);
}

}  // namespace countsynth
