#include "countsynth/constraints.hpp"

#include <cassert>
#include <sstream>

namespace countsynth {

void CountingConstraint::check(const Alphabet& alphabet) const {
  if (id.empty()) throw InputError("constraint: empty id");
  if (window == 0) throw InputError("constraint " + id + ": window length must be positive");
  if (bound > window)
    throw InputError("constraint " + id + ": bound " + std::to_string(bound) +
                     " exceeds window length " + std::to_string(window));
  if (formula.atoms() & ~alphabet.player_mask(player))
    throw InputError("constraint " + id + ": formula uses letters outside the " +
                     std::string(player_name(player)) + " alphabet");
}

std::string CountingConstraint::describe(const Alphabet& alphabet) const {
  std::ostringstream os;
  os << id << ": " << player_name(player) << " plays (" << formula.text(alphabet) << ") at "
     << (kind == CcKind::Min ? "least" : "most") << " " << bound << " of " << window
     << " own turns";
  return os.str();
}

CountingConstraint translate_max_to_min(const CountingConstraint& c) {
  if (c.kind != CcKind::Max || c.player != Player::Ego)
    throw InputError("translate_max_to_min: only Max constraints of ego can be translated");
  CountingConstraint r;
  r.id = c.id + "~min";
  r.player = Player::Ego;
  r.kind = CcKind::Min;
  r.formula = ActionFormula::negation(c.formula);
  r.bound = c.window - c.bound;
  r.window = c.window;
  return r;
}

char mark_char(Mark m) {
  switch (m) {
    case Mark::None: return 'n';
    case Mark::Zero: return '0';
    case Mark::One: return '1';
  }
  return '?';
}

bool window_satisfied(std::span<const Mark> entries, uint32_t bound, CcKind kind) {
  if (entries.empty()) throw InputError("window_satisfied: empty history vector");
  uint32_t ones = 0, nones = 0;
  bool seen_none = false;
  for (Mark m : entries) {
    if (m == Mark::One) ones++;
    if (m == Mark::None) {
      nones++;
      seen_none = true;
    } else if (seen_none) {
      throw InputError("window_satisfied: None entries must form a suffix");
    }
  }
  return kind == CcKind::Min ? ones + nones >= bound : ones <= bound;
}

ConstraintMonitor::ConstraintMonitor(std::vector<CountingConstraint> constraints,
                                     const Alphabet& alphabet)
    : constraints_(std::move(constraints)) {
  tracks_.resize(constraints_.size());
  verdicts_.resize(constraints_.size());
  for (size_t i = 0; i < constraints_.size(); ++i) {
    constraints_[i].check(alphabet);
    tracks_[i].window.assign(constraints_[i].window, Mark::None);
  }
}

void ConstraintMonitor::push(size_t i, bool hit) {
  Track& t = tracks_[i];
  const CountingConstraint& c = constraints_[i];
  t.head = t.head == 0 ? c.window - 1 : t.head - 1;
  t.window[t.head] = hit ? Mark::One : Mark::Zero;
  t.turns++;
  if (verdicts_[i].violated()) return;
  if (!window_satisfied(history(i), c.bound, c.kind)) {
    verdicts_[i].status = CcStatus::Violated;
    uint64_t end = t.turns;
    uint64_t begin = end >= c.window ? end - c.window + 1 : 1;
    verdicts_[i].window_begin = static_cast<uint32_t>(begin);
    verdicts_[i].window_end = static_cast<uint32_t>(end);
  }
}

void ConstraintMonitor::step(Player mover, ActionSet act) {
  for (size_t i = 0; i < constraints_.size(); ++i)
    if (constraints_[i].player == mover) push(i, constraints_[i].formula.eval(act));
}

bool ConstraintMonitor::move_keeps_satisfiable(Player mover, ActionSet act) const {
  for (size_t i = 0; i < constraints_.size(); ++i) {
    const CountingConstraint& c = constraints_[i];
    if (c.player != mover) continue;
    if (verdicts_[i].violated()) return false;
    std::vector<Mark> next = history(i);
    for (uint32_t j = c.window - 1; j > 0; --j) next[j] = next[j - 1];
    next[0] = c.formula.eval(act) ? Mark::One : Mark::Zero;
    if (!window_satisfied(next, c.bound, c.kind)) return false;
  }
  return true;
}

bool ConstraintMonitor::all_satisfiable() const {
  for (const WindowVerdict& v : verdicts_)
    if (v.violated()) return false;
  return true;
}

std::vector<Mark> ConstraintMonitor::history(size_t i) const {
  const Track& t = tracks_[i];
  uint32_t l = constraints_[i].window;
  std::vector<Mark> out(l, Mark::None);
  uint32_t filled = static_cast<uint32_t>(std::min<uint64_t>(t.turns, l));
  for (uint32_t j = 0; j < filled; ++j) out[j] = t.window[(t.head + j) % l];
  return out;
}

std::map<std::string, WindowVerdict> monitor_prefix(const Prefix& prefix,
                                                    const std::vector<CountingConstraint>& constraints,
                                                    const GameGraph& g) {
  validate_prefix(g, prefix);
  ConstraintMonitor monitor(constraints, g.alphabet());
  StateId at = prefix.start;
  for (const Prefix::Step& step : prefix.steps) {
    monitor.step(g.owner(at), step.action);
    at = step.to;
  }
  std::map<std::string, WindowVerdict> out;
  for (size_t i = 0; i < monitor.size(); ++i)
    out[monitor.constraint(i).id] = monitor.verdict(i);
  return out;
}

}  // namespace countsynth
