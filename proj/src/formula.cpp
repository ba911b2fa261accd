#include "countsynth/formula.hpp"

#include <cassert>

#include "countsynth/game.hpp"

namespace countsynth {

ActionFormula::ActionFormula() : ActionFormula(constant(true)) {}

ActionFormula ActionFormula::constant(bool value) {
  ActionFormula f{raw_t{}};
  f.nodes_ = {Node{value ? Op::True : Op::False}};
  f.root_ = 0;
  f.atoms_ = 0;
  return f;
}

ActionFormula ActionFormula::atom(uint32_t letter) {
  if (letter >= kMaxLetters) throw InputError("formula atom: letter index out of range");
  ActionFormula f{raw_t{}};
  f.nodes_ = {Node{Op::Atom, letter}};
  f.root_ = 0;
  f.atoms_ = ActionSet{1} << letter;
  return f;
}

uint32_t ActionFormula::append(const ActionFormula& f) {
  uint32_t base = static_cast<uint32_t>(nodes_.size());
  for (Node n : f.nodes_) {
    if (n.op == Op::Not) {
      n.a += base;
    } else if (n.op == Op::And || n.op == Op::Or) {
      n.a += base;
      n.b += base;
    }
    nodes_.push_back(n);
  }
  atoms_ |= f.atoms_;
  return base + f.root_;
}

ActionFormula ActionFormula::negation(ActionFormula f) {
  ActionFormula r{raw_t{}};
  uint32_t child = r.append(f);
  r.nodes_.push_back(Node{Op::Not, child});
  r.root_ = static_cast<uint32_t>(r.nodes_.size() - 1);
  return r;
}

ActionFormula ActionFormula::conjunction(ActionFormula lhs, ActionFormula rhs) {
  ActionFormula r{raw_t{}};
  uint32_t a = r.append(lhs);
  uint32_t b = r.append(rhs);
  r.nodes_.push_back(Node{Op::And, a, b});
  r.root_ = static_cast<uint32_t>(r.nodes_.size() - 1);
  return r;
}

ActionFormula ActionFormula::disjunction(ActionFormula lhs, ActionFormula rhs) {
  ActionFormula r{raw_t{}};
  uint32_t a = r.append(lhs);
  uint32_t b = r.append(rhs);
  r.nodes_.push_back(Node{Op::Or, a, b});
  r.root_ = static_cast<uint32_t>(r.nodes_.size() - 1);
  return r;
}

bool ActionFormula::eval(ActionSet act) const {
  // Iterative evaluation over the node array; children precede parents.
  std::vector<bool> value(nodes_.size());
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::False: value[i] = false; break;
      case Op::True: value[i] = true; break;
      case Op::Atom: value[i] = (act >> n.a) & 1; break;
      case Op::Not: value[i] = !value[n.a]; break;
      case Op::And: value[i] = value[n.a] && value[n.b]; break;
      case Op::Or: value[i] = value[n.a] || value[n.b]; break;
    }
  }
  return value[root_];
}

namespace {

int precedence(char op) { return op == '|' ? 1 : op == '&' ? 2 : 3; }

}  // namespace

std::string ActionFormula::text(const Alphabet& alphabet) const {
  // Render bottom-up, inserting parentheses when a child binds weaker.
  std::vector<std::string> str(nodes_.size());
  std::vector<char> kind(nodes_.size());  // '|', '&', or 'a' for atomic-like
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    auto wrap = [&](uint32_t c, int min_prec) {
      return precedence(kind[c]) < min_prec ? "(" + str[c] + ")" : str[c];
    };
    switch (n.op) {
      case Op::False: str[i] = "false"; kind[i] = 'a'; break;
      case Op::True: str[i] = "true"; kind[i] = 'a'; break;
      case Op::Atom: str[i] = alphabet.name(n.a); kind[i] = 'a'; break;
      case Op::Not: str[i] = "!" + wrap(n.a, 3); kind[i] = 'a'; break;
      case Op::And: str[i] = wrap(n.a, 2) + " & " + wrap(n.b, 2); kind[i] = '&'; break;
      case Op::Or: str[i] = wrap(n.a, 1) + " | " + wrap(n.b, 1); kind[i] = '|'; break;
    }
  }
  return str[root_];
}

}  // namespace countsynth
