#include "countsynth/generator.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "countsynth/constraints.hpp"
#include "countsynth/io.hpp"
#include "countsynth/rng.hpp"

namespace countsynth {

namespace {

// Random formula over the given letters: an atom, a negated atom, or a
// binary connective over two distinct atoms.
ActionFormula random_formula(SplitMix64& rng, const std::vector<uint32_t>& letters) {
  uint32_t a = letters[rng.below(letters.size())];
  switch (letters.size() > 1 ? rng.below(4) : rng.below(2)) {
    case 0: return ActionFormula::atom(a);
    case 1: return ActionFormula::negation(ActionFormula::atom(a));
    case 2: {
      uint32_t b = letters[rng.below(letters.size())];
      return ActionFormula::disjunction(ActionFormula::atom(a), ActionFormula::atom(b));
    }
    default: {
      uint32_t b = letters[rng.below(letters.size())];
      return ActionFormula::conjunction(ActionFormula::atom(a), ActionFormula::atom(b));
    }
  }
}

}  // namespace

std::string generate_random_game(const GeneratorParams& params) {
  if (params.states < 2 || params.branching == 0 || params.ego_letters == 0 ||
      params.adv_letters == 0 || params.max_window == 0 ||
      params.min_window > params.max_window)
    throw InputError("generate_random_game: parameters must be positive and consistent");

  SplitMix64 rng(params.seed);
  GameGraph g;
  Alphabet& alphabet = g.alphabet();

  std::vector<uint32_t> ego_letters, adv_letters;
  for (uint32_t i = 0; i < params.ego_letters; ++i)
    ego_letters.push_back(alphabet.add("x" + std::to_string(i), Player::Ego));
  for (uint32_t i = 0; i < params.adv_letters; ++i)
    adv_letters.push_back(alphabet.add("y" + std::to_string(i), Player::Adv));

  uint32_t half = (params.states + 1) / 2;
  std::vector<StateId> ego_states, adv_states;
  for (uint32_t i = 0; i < half; ++i)
    ego_states.push_back(g.add_state("e" + std::to_string(i), Player::Ego));
  for (uint32_t i = 0; i < half; ++i)
    adv_states.push_back(g.add_state("a" + std::to_string(i), Player::Adv));
  g.set_initial(ego_states[0]);

  // Constraints precede transitions: the compliant adversary action set is
  // part of the graph construction.
  std::vector<CountingConstraint> constraints;
  uint32_t next_id = 1;
  auto draw_window = [&](uint32_t bound) {
    uint32_t lo = std::max(std::max(bound, 1u), params.min_window);
    return lo + static_cast<uint32_t>(rng.below(params.max_window - lo + 1));
  };
  for (uint32_t i = 0; i < params.ego_min_constraints; ++i) {
    CountingConstraint c;
    c.id = "C" + std::to_string(next_id++);
    c.player = Player::Ego;
    c.kind = CcKind::Min;
    c.formula = random_formula(rng, ego_letters);
    c.bound = 1 + static_cast<uint32_t>(rng.below(std::max(1u, params.max_bound)));
    c.window = draw_window(c.bound);
    constraints.push_back(std::move(c));
  }
  for (uint32_t i = 0; i < params.ego_max_constraints; ++i) {
    CountingConstraint c;
    c.id = "C" + std::to_string(next_id++);
    c.player = Player::Ego;
    c.kind = CcKind::Max;
    c.formula = random_formula(rng, ego_letters);
    c.bound = static_cast<uint32_t>(rng.below(params.max_bound + 1));
    c.window = draw_window(c.bound);
    constraints.push_back(std::move(c));
  }
  for (uint32_t i = 0; i < params.adv_constraints; ++i) {
    CountingConstraint c;
    c.id = "C" + std::to_string(next_id++);
    c.player = Player::Adv;
    c.kind = rng.chance(50) ? CcKind::Min : CcKind::Max;
    c.formula = random_formula(rng, adv_letters);
    c.bound = c.kind == CcKind::Min
                  ? 1 + static_cast<uint32_t>(rng.below(std::max(1u, params.max_bound)))
                  : static_cast<uint32_t>(rng.below(params.max_bound + 1));
    c.window = draw_window(c.bound);
    constraints.push_back(std::move(c));
  }

  // One adversary action set that satisfies every adversary Min formula and
  // falsifies every adversary Max formula; playing it from any situation
  // keeps all adversary constraints satisfied.
  ActionSet adv_mask = alphabet.player_mask(Player::Adv);
  std::optional<ActionSet> compliant;
  for (ActionSet sub = adv_mask;; sub = (sub - 1) & adv_mask) {
    bool ok = true;
    for (const CountingConstraint& c : constraints) {
      if (c.player != Player::Adv) continue;
      bool hit = c.formula.eval(sub);
      if (c.kind == CcKind::Min ? !hit : hit) {
        ok = false;
        break;
      }
    }
    if (ok) {
      compliant = sub;
      break;
    }
    if (sub == 0) break;
  }
  if (!compliant)
    throw InputError(
        "generate_random_game: no adversary action set satisfies all adversary min formulas "
        "while falsifying all max formulas; these constraints cannot yield a rational game");

  auto random_action = [&](Player p) -> ActionSet {
    if (p == Player::Ego && params.singleton_ego_actions)
      return ActionSet{1} << ego_letters[rng.below(ego_letters.size())];
    ActionSet mask = alphabet.player_mask(p);
    ActionSet act = 0;
    for (uint32_t bit = 0; bit < kMaxLetters; ++bit)
      if (((mask >> bit) & 1) && rng.chance(50)) act |= ActionSet{1} << bit;
    return act;
  };

  // Ring backbone e0 -> a0 -> e1 -> ... -> a(n-1) -> e0 keeps every state
  // reachable and deadlock-free; extra edges add branching.
  std::vector<std::set<ActionSet>> used(g.state_count());
  auto add_edge = [&](StateId from, ActionSet act, StateId to) {
    if (!used[from].insert(act).second) return false;
    g.add_transition(from, act, to);
    return true;
  };
  for (uint32_t i = 0; i < half; ++i) {
    StateId e = ego_states[i], a = adv_states[i];
    ActionSet act = params.singleton_ego_actions
                        ? ActionSet{1} << ego_letters[rng.below(ego_letters.size())]
                        : random_action(Player::Ego);
    add_edge(e, act, a);
    add_edge(a, *compliant, ego_states[(i + 1) % half]);
  }
  for (uint32_t i = 0; i < half; ++i) {
    for (uint32_t extra = 1; extra < params.branching; ++extra) {
      if (rng.chance(70))
        add_edge(ego_states[i], random_action(Player::Ego),
                 adv_states[rng.below(adv_states.size())]);
      if (rng.chance(70))
        add_edge(adv_states[i], random_action(Player::Adv),
                 ego_states[rng.below(ego_states.size())]);
    }
  }
  g.seal();

  WinningCondition win;
  win.kind = params.kind;
  switch (params.kind) {
    case WinKind::Safety:
    case WinKind::CoBuchi: {
      win.states = Bitset(g.state_count());
      for (StateId s = 0; s < g.state_count(); ++s)
        if (s == g.initial() || !rng.chance(params.unsafe_percent)) win.states.set(s);
      break;
    }
    case WinKind::Reachability:
    case WinKind::Buchi: {
      win.states = Bitset(g.state_count());
      uint32_t targets = 1 + static_cast<uint32_t>(rng.below(2));
      for (uint32_t i = 0; i < targets; ++i)
        win.states.set(static_cast<size_t>(rng.below(g.state_count())));
      break;
    }
    case WinKind::Parity: {
      win.coloring.resize(g.state_count());
      for (StateId s = 0; s < g.state_count(); ++s)
        win.coloring[s] = static_cast<uint32_t>(rng.below(4));
      break;
    }
  }

  std::string text = serialize_game(g, win, constraints);

  // Re-check what the construction promises.
  ParsedGame parsed = parse_game(text);
  ValidationReport rationality = validate_rationality(parsed.graph, parsed.constraints);
  if (!rationality.valid())
    throw StateError("generate_random_game: generated game failed the rationality check: " +
                     rationality.summary());
  return text;
}

}  // namespace countsynth
