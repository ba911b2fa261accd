#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "countsynth/constraints.hpp"
#include "countsynth/engine.hpp"
#include "countsynth/game.hpp"

namespace countsynth {

// Parse failure with a position. line/column are 1-based; column 0 means
// the whole line.
struct ParseError : InputError {
  ParseError(uint32_t line, uint32_t column, const std::string& message)
      : InputError("line " + std::to_string(line) +
                   (column ? ":" + std::to_string(column) : "") + ": " + message),
        line(line),
        column(column) {}
  uint32_t line;
  uint32_t column;
};

struct ParsedGame {
  GameGraph graph;
  WinningCondition win;
  std::vector<CountingConstraint> constraints;
};

// Game file format (structured text, '#' starts a comment):
//
//   countgame v1
//   alphabet ego x y
//   alphabet adv a b c
//   state 1 ego
//   state 2 adv
//   initial 1
//   trans 1 -> 2 : y          # letters after ':' form the action set
//   trans 1 -> 4 : x
//   win safety all            # or: win reach 3 5 | win parity 1=0 2=1 ...
//   constraint C1 ego min 2 4 : x
//   constraint C4 adv min 1 2 : a | b
//
// Formula grammar: atom | "!" f | f "&" f | f "|" f | "(" f ")" | "true"
// | "false", with "&" binding tighter than "|".
//
// The returned triple passed structural validation; a violated arena
// condition raises ParseError at the offending line.
ParsedGame parse_game(std::string_view text);
ParsedGame parse_game_file(const std::string& path);

std::string serialize_game(const GameGraph& g, const WinningCondition& win,
                           const std::vector<CountingConstraint>& constraints);

// Parses the formula concrete syntax against an alphabet. `line` and
// `column_offset` locate diagnostics when the text is embedded in a file.
ActionFormula parse_formula(std::string_view text, const Alphabet& alphabet, uint32_t line = 0,
                            uint32_t column_offset = 0);

// Strategy transducer file:
//
//   countstrategy v1
//   states 3
//   initial 0
//   mstate 0 ego 1 emit :            # id owner base-state, ego states carry emit
//   medge 0 : -> 1
//   mstate 1 adv 2
//   medge 1 : b -> 2
//   stitch 2 from (7, C=(0,n,n)) to (7, C=(0,n))
std::string serialize_strategy(const StrategyMachine& machine, const GameGraph& g);
StrategyMachine parse_strategy(std::string_view text, const GameGraph& g);
StrategyMachine parse_strategy_file(const std::string& path, const GameGraph& g);

// Human-readable, machine-greppable synthesis report. Intermediate winning
// regions are under-approximations of their full games and are labeled as
// such.
std::string format_report(const RunReport& report);

struct BenchRow {
  std::string game;
  std::string mode;
  std::string decision;
  uint64_t states = 0;  // nodes of the last situation graph, sinks included
  uint64_t edges = 0;
  uint64_t region = 0;
  uint64_t store = 0;
  double ms = 0.0;
};

inline constexpr const char* kBenchHeader = "game,mode,decision,states,edges,region,store,ms";

std::string format_bench_csv(const std::vector<BenchRow>& rows);

BenchRow bench_row(const std::string& game, const std::string& mode, const SynthesisResult& r);

void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace countsynth
