#pragma once

#include <string>
#include <vector>

#include "countsynth/constraints.hpp"
#include "countsynth/game.hpp"
#include "countsynth/io.hpp"

#ifndef COUNTSYNTH_GAMES_DIR
#define COUNTSYNTH_GAMES_DIR "."
#endif

namespace countsynth::testing {

inline ParsedGame load_game(const std::string& name) {
  return parse_game_file(std::string(COUNTSYNTH_GAMES_DIR) + "/" + name);
}

inline ActionSet action(const GameGraph& g, const std::string& letters) {
  ActionSet act = 0;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    auto letter = g.alphabet().find(word);
    if (!letter) throw InputError("tests: unknown letter " + word);
    act |= ActionSet{1} << *letter;
    word.clear();
  };
  for (char c : letters) {
    if (c == ' ')
      flush();
    else
      word.push_back(c);
  }
  flush();
  return act;
}

// Prefix from "state action state action state ..." tokens; actions may be
// "" for the empty set, written as "-".
inline Prefix make_prefix(const GameGraph& g, const std::vector<std::string>& walk) {
  Prefix p;
  p.start = *g.find_state(walk.at(0));
  for (size_t i = 1; i + 1 < walk.size(); i += 2) {
    ActionSet act = walk[i] == "-" ? 0 : action(g, walk[i]);
    p.steps.push_back({act, *g.find_state(walk[i + 1])});
  }
  return p;
}

inline std::vector<Mark> marks(const std::string& text) {
  std::vector<Mark> out;
  for (char c : text) {
    if (c == '1') out.push_back(Mark::One);
    if (c == '0') out.push_back(Mark::Zero);
    if (c == 'n') out.push_back(Mark::None);
  }
  return out;
}

inline CountingConstraint cc(std::string id, Player p, CcKind kind, ActionFormula f, uint32_t k,
                             uint32_t l) {
  CountingConstraint c;
  c.id = std::move(id);
  c.player = p;
  c.kind = kind;
  c.formula = std::move(f);
  c.bound = k;
  c.window = l;
  return c;
}

}  // namespace countsynth::testing
