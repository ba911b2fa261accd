#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "countsynth/types.hpp"

namespace countsynth {

class Alphabet;

// Propositional formula over action letters. Evaluation uses total
// valuations: exactly the letters contained in the played action set are
// true, every other letter is false. Under this reading playing {x} makes
// "!y" hold, and negation is a genuine complement on action sets.
class ActionFormula {
 public:
  ActionFormula();  // the constant true

  static ActionFormula constant(bool value);
  static ActionFormula atom(uint32_t letter);
  static ActionFormula negation(ActionFormula f);
  static ActionFormula conjunction(ActionFormula lhs, ActionFormula rhs);
  static ActionFormula disjunction(ActionFormula lhs, ActionFormula rhs);

  bool eval(ActionSet act) const;

  // Mask of letters occurring in the formula.
  ActionSet atoms() const { return atoms_; }

  // Concrete syntax, parenthesized enough to re-parse.
  std::string text(const Alphabet& alphabet) const;

 private:
  enum class Op : uint8_t { False, True, Atom, Not, And, Or };
  struct Node {
    Op op;
    uint32_t a = 0;  // letter for Atom, child index otherwise
    uint32_t b = 0;  // second child for And/Or
  };
  struct raw_t {};
  explicit ActionFormula(raw_t) {}

  uint32_t append(const ActionFormula& f);  // returns index of f's root

  std::vector<Node> nodes_;
  uint32_t root_ = 0;
  ActionSet atoms_ = 0;
};

}  // namespace countsynth
