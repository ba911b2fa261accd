#include "countsynth/io.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <fstream>
#include <sstream>

namespace countsynth {

namespace {

struct Token {
  std::string text;
  uint32_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) i++;
    if (i < line.size() && line[i] == '#') break;
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      i++;
    if (i > start)
      out.push_back({std::string(line.substr(start, i - start)),
                     static_cast<uint32_t>(start + 1)});
  }
  return out;
}

uint32_t parse_number(const Token& tok, uint32_t line, const char* what) {
  uint64_t value = 0;
  if (tok.text.empty()) throw ParseError(line, tok.column, std::string("expected ") + what);
  for (char c : tok.text) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError(line, tok.column,
                       std::string("expected ") + what + ", got '" + tok.text + "'");
    value = value * 10 + (c - '0');
    if (value > UINT32_MAX)
      throw ParseError(line, tok.column, std::string(what) + " out of range");
  }
  return static_cast<uint32_t>(value);
}

// Recursive-descent formula parser over the fixed grammar; '&' binds
// tighter than '|', '!' tighter than both.
class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Alphabet& alphabet, uint32_t line,
                uint32_t column_offset)
      : text_(text), alphabet_(alphabet), line_(line), offset_(column_offset) {}

  ActionFormula parse() {
    ActionFormula f = parse_or();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected trailing input in formula");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) {
    throw ParseError(line_, offset_ + static_cast<uint32_t>(pos_) + 1, message);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) pos_++;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      pos_++;
      return true;
    }
    return false;
  }

  ActionFormula parse_or() {
    ActionFormula f = parse_and();
    while (eat('|')) f = ActionFormula::disjunction(std::move(f), parse_and());
    return f;
  }

  ActionFormula parse_and() {
    ActionFormula f = parse_unary();
    while (eat('&')) f = ActionFormula::conjunction(std::move(f), parse_unary());
    return f;
  }

  ActionFormula parse_unary() {
    if (eat('!')) return ActionFormula::negation(parse_unary());
    if (eat('(')) {
      ActionFormula f = parse_or();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    skip_space();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      pos_++;
    if (pos_ == start) fail("expected an action letter, 'true', 'false', '!' or '('");
    std::string word(text_.substr(start, pos_ - start));
    if (word == "true") return ActionFormula::constant(true);
    if (word == "false") return ActionFormula::constant(false);
    auto letter = alphabet_.find(word);
    if (!letter) {
      pos_ = start;
      fail("unknown action letter '" + word + "'");
    }
    return ActionFormula::atom(*letter);
  }

  std::string_view text_;
  const Alphabet& alphabet_;
  uint32_t line_;
  uint32_t offset_;
  size_t pos_ = 0;
};

class GameParser {
 public:
  explicit GameParser(std::string_view text) : text_(text) {}

  ParsedGame parse() {
    std::istringstream in{std::string(text_)};
    std::string line;
    while (std::getline(in, line)) {
      line_no_++;
      auto tokens = tokenize(line);
      if (tokens.empty()) continue;
      handle(line, tokens);
    }
    finish();
    return std::move(game_);
  }

 private:
  [[noreturn]] void fail(uint32_t column, const std::string& message) {
    throw ParseError(line_no_, column, message);
  }

  void require(bool cond, const std::vector<Token>& tokens, size_t at, const char* message) {
    if (!cond) fail(at < tokens.size() ? tokens[at].column : 0, message);
  }

  Player parse_player(const Token& tok) {
    if (tok.text == "ego") return Player::Ego;
    if (tok.text == "adv") return Player::Adv;
    fail(tok.column, "expected 'ego' or 'adv', got '" + tok.text + "'");
  }

  StateId parse_state(const Token& tok) {
    auto s = game_.graph.find_state(tok.text);
    if (!s) fail(tok.column, "unknown state '" + tok.text + "'");
    return *s;
  }

  // Letters up to an optional terminator token; records transitions with
  // foreign letters as-is so validation can point at them.
  ActionSet parse_action(const std::vector<Token>& tokens, size_t from) {
    ActionSet act = 0;
    for (size_t i = from; i < tokens.size(); ++i) {
      auto letter = game_.graph.alphabet().find(tokens[i].text);
      if (!letter) fail(tokens[i].column, "unknown action letter '" + tokens[i].text + "'");
      act |= ActionSet{1} << *letter;
    }
    return act;
  }

  void handle(const std::string& line, const std::vector<Token>& tokens) {
    const std::string& head = tokens[0].text;
    if (head == "countgame") {
      require(tokens.size() == 2 && tokens[1].text == "v1", tokens, 1,
              "expected header 'countgame v1'");
      saw_header_ = true;
      return;
    }
    if (!saw_header_) fail(tokens[0].column, "file must start with 'countgame v1'");

    if (head == "alphabet") {
      require(tokens.size() >= 2, tokens, 1, "expected 'alphabet ego|adv <letters...>'");
      Player p = parse_player(tokens[1]);
      for (size_t i = 2; i < tokens.size(); ++i) {
        try {
          game_.graph.alphabet().add(tokens[i].text, p);
        } catch (const InputError& e) {
          fail(tokens[i].column, e.what());
        }
      }
    } else if (head == "state") {
      require(tokens.size() == 3, tokens, tokens.size() - 1, "expected 'state <name> ego|adv'");
      Player p = parse_player(tokens[2]);
      try {
        game_.graph.add_state(tokens[1].text, p);
      } catch (const InputError& e) {
        fail(tokens[1].column, e.what());
      }
    } else if (head == "initial") {
      require(tokens.size() == 2, tokens, 1, "expected 'initial <state>'");
      game_.graph.set_initial(parse_state(tokens[1]));
      saw_initial_ = true;
    } else if (head == "trans") {
      // trans <from> -> <to> : <letters...>
      require(tokens.size() >= 5 && tokens[2].text == "->" && tokens[4].text == ":", tokens,
              std::min<size_t>(tokens.size() - 1, 4),
              "expected 'trans <from> -> <to> : <letters...>'");
      StateId from = parse_state(tokens[1]);
      StateId to = parse_state(tokens[3]);
      ActionSet act = parse_action(tokens, 5);
      game_.graph.add_transition(from, act, to);
    } else if (head == "win") {
      require(tokens.size() >= 2, tokens, 1, "expected 'win <kind> ...'");
      if (saw_win_) fail(tokens[0].column, "duplicate 'win' line");
      saw_win_ = true;
      win_tokens_ = tokens;
      win_line_ = line_no_;
    } else if (head == "constraint") {
      // constraint <id> <ego|adv> <min|max> <k> <l> : <formula>
      require(tokens.size() >= 7 && tokens[6].text == ":", tokens,
              std::min<size_t>(tokens.size() - 1, 6),
              "expected 'constraint <id> ego|adv min|max <k> <l> : <formula>'");
      CountingConstraint c;
      c.id = tokens[1].text;
      for (const CountingConstraint& seen : game_.constraints)
        if (seen.id == c.id) fail(tokens[1].column, "duplicate constraint id '" + c.id + "'");
      c.player = parse_player(tokens[2]);
      if (tokens[3].text == "min")
        c.kind = CcKind::Min;
      else if (tokens[3].text == "max")
        c.kind = CcKind::Max;
      else
        fail(tokens[3].column, "expected 'min' or 'max'");
      c.bound = parse_number(tokens[4], line_no_, "bound k");
      c.window = parse_number(tokens[5], line_no_, "window length l");
      size_t colon = line.find(':');
      assert(colon != std::string::npos);
      std::string_view formula_text = std::string_view(line).substr(colon + 1);
      c.formula = parse_formula(formula_text, game_.graph.alphabet(), line_no_,
                                static_cast<uint32_t>(colon + 1));
      try {
        c.check(game_.graph.alphabet());
      } catch (const InputError& e) {
        fail(tokens[1].column, e.what());
      }
      game_.constraints.push_back(std::move(c));
    } else {
      fail(tokens[0].column, "unknown directive '" + head + "'");
    }
  }

  void parse_win() {
    const std::vector<Token>& tokens = win_tokens_;
    uint32_t saved_line = line_no_;
    line_no_ = win_line_;
    const std::string& kind = tokens[1].text;
    if (kind == "parity") {
      game_.win.kind = WinKind::Parity;
      game_.win.coloring.assign(game_.graph.state_count(), UINT32_MAX);
      for (size_t i = 2; i < tokens.size(); ++i) {
        size_t eq = tokens[i].text.find('=');
        if (eq == std::string::npos)
          fail(tokens[i].column, "expected '<state>=<color>', got '" + tokens[i].text + "'");
        auto s = game_.graph.find_state(tokens[i].text.substr(0, eq));
        if (!s) fail(tokens[i].column, "unknown state in coloring");
        game_.win.coloring[*s] =
            parse_number({tokens[i].text.substr(eq + 1), tokens[i].column}, line_no_, "color");
      }
      for (StateId s = 0; s < game_.graph.state_count(); ++s)
        if (game_.win.coloring[s] == UINT32_MAX)
          fail(tokens[1].column,
               "parity coloring misses state " + game_.graph.state_name(s));
    } else {
      if (kind == "safety")
        game_.win.kind = WinKind::Safety;
      else if (kind == "reach")
        game_.win.kind = WinKind::Reachability;
      else if (kind == "buchi")
        game_.win.kind = WinKind::Buchi;
      else if (kind == "cobuchi")
        game_.win.kind = WinKind::CoBuchi;
      else
        fail(tokens[1].column, "unknown winning condition '" + kind + "'");
      game_.win.states = Bitset(game_.graph.state_count());
      if (tokens.size() == 3 && tokens[2].text == "all") {
        game_.win.states = game_.win.states.complement();
      } else {
        for (size_t i = 2; i < tokens.size(); ++i) game_.win.states.set(parse_state(tokens[i]));
      }
    }
    line_no_ = saved_line;
  }

  void finish() {
    if (!saw_header_) throw ParseError(1, 0, "file must start with 'countgame v1'");
    if (game_.graph.state_count() == 0) throw ParseError(line_no_, 0, "no states declared");
    if (!saw_initial_) throw ParseError(line_no_, 0, "no 'initial' line");
    if (!saw_win_) throw ParseError(line_no_, 0, "no 'win' line");
    game_.graph.seal();
    parse_win();

    ValidationReport report = validate_graph(game_.graph);
    if (!report.valid())
      throw ParseError(line_no_, 0, "graph validation failed: " + report.summary());
    game_.win.check(game_.graph);
  }

  std::string_view text_;
  ParsedGame game_;
  uint32_t line_no_ = 0;
  bool saw_header_ = false;
  bool saw_initial_ = false;
  bool saw_win_ = false;
  std::vector<Token> win_tokens_;
  uint32_t win_line_ = 0;
};

}  // namespace

ActionFormula parse_formula(std::string_view text, const Alphabet& alphabet, uint32_t line,
                            uint32_t column_offset) {
  return FormulaParser(text, alphabet, line, column_offset).parse();
}

ParsedGame parse_game(std::string_view text) { return GameParser(text).parse(); }

ParsedGame parse_game_file(const std::string& path) {
  return parse_game(read_text_file(path));
}

std::string serialize_game(const GameGraph& g, const WinningCondition& win,
                           const std::vector<CountingConstraint>& constraints) {
  std::ostringstream os;
  os << "countgame v1\n";
  for (Player p : {Player::Ego, Player::Adv}) {
    os << "alphabet " << player_name(p);
    for (const std::string& letter : g.alphabet().letters(p)) os << ' ' << letter;
    os << '\n';
  }
  for (StateId s = 0; s < g.state_count(); ++s)
    os << "state " << g.state_name(s) << ' ' << player_name(g.owner(s)) << '\n';
  os << "initial " << g.state_name(g.initial()) << '\n';
  for (StateId s = 0; s < g.state_count(); ++s)
    for (const GameGraph::Edge& e : g.out(s))
      os << "trans " << g.state_name(s) << " -> " << g.state_name(e.to) << " : "
         << g.alphabet().action_text(e.action) << '\n';
  os << "win " << win_kind_name(win.kind);
  if (win.kind == WinKind::Parity) {
    for (StateId s = 0; s < g.state_count(); ++s)
      os << ' ' << g.state_name(s) << '=' << win.coloring[s];
  } else if (win.states.count() == g.state_count()) {
    os << " all";
  } else {
    win.states.for_each([&](size_t s) { os << ' ' << g.state_name(static_cast<StateId>(s)); });
  }
  os << '\n';
  for (const CountingConstraint& c : constraints)
    os << "constraint " << c.id << ' ' << player_name(c.player) << ' '
       << (c.kind == CcKind::Min ? "min" : "max") << ' ' << c.bound << ' ' << c.window << " : "
       << c.formula.text(g.alphabet()) << '\n';
  return os.str();
}

std::string serialize_strategy(const StrategyMachine& machine, const GameGraph& g) {
  std::ostringstream os;
  os << "countstrategy v1\n";
  os << "states " << machine.size() << '\n';
  os << "initial " << machine.initial << '\n';
  for (uint32_t m = 0; m < machine.size(); ++m) {
    const StrategyMachine::State& st = machine.states[m];
    os << "mstate " << m << ' ' << player_name(st.owner) << ' ' << g.state_name(st.base);
    if (st.owner == Player::Ego)
      os << " emit : " << g.alphabet().action_text(st.emit);
    os << '\n';
    if (!st.note.empty()) os << "# " << st.note << '\n';
    for (const auto& [action, to] : st.edges)
      os << "medge " << m << " : " << g.alphabet().action_text(action) << " -> " << to << '\n';
  }
  for (const StrategyMachine::Stitch& s : machine.stitches)
    os << "stitch " << s.state << " from " << s.from << " to " << s.to << '\n';
  return os.str();
}

StrategyMachine parse_strategy(std::string_view text, const GameGraph& g) {
  StrategyMachine machine;
  std::istringstream in{std::string(text)};
  std::string line;
  uint32_t line_no = 0;
  bool saw_header = false;
  auto letters_to_action = [&](const std::vector<Token>& tokens, size_t from, size_t to,
                               uint32_t line_no) {
    ActionSet act = 0;
    for (size_t i = from; i < to; ++i) {
      auto letter = g.alphabet().find(tokens[i].text);
      if (!letter)
        throw ParseError(line_no, tokens[i].column,
                         "unknown action letter '" + tokens[i].text + "'");
      act |= ActionSet{1} << *letter;
    }
    return act;
  };

  while (std::getline(in, line)) {
    line_no++;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& head = tokens[0].text;
    if (head == "countstrategy") {
      if (tokens.size() != 2 || tokens[1].text != "v1")
        throw ParseError(line_no, 0, "expected header 'countstrategy v1'");
      saw_header = true;
      continue;
    }
    if (!saw_header) throw ParseError(line_no, 0, "file must start with 'countstrategy v1'");
    if (head == "states") {
      if (tokens.size() != 2) throw ParseError(line_no, 0, "expected 'states <count>'");
      machine.states.resize(parse_number(tokens[1], line_no, "state count"));
    } else if (head == "initial") {
      if (tokens.size() != 2) throw ParseError(line_no, 0, "expected 'initial <id>'");
      machine.initial = parse_number(tokens[1], line_no, "initial state");
    } else if (head == "mstate") {
      if (tokens.size() < 4) throw ParseError(line_no, 0, "expected 'mstate <id> <owner> <state>'");
      uint32_t id = parse_number(tokens[1], line_no, "machine state id");
      if (id >= machine.states.size())
        throw ParseError(line_no, tokens[1].column, "machine state id out of range");
      StrategyMachine::State& st = machine.states[id];
      st.owner = tokens[2].text == "ego" ? Player::Ego : Player::Adv;
      auto base = g.find_state(tokens[3].text);
      if (!base) throw ParseError(line_no, tokens[3].column, "unknown game state");
      st.base = *base;
      if (st.owner == Player::Ego) {
        if (tokens.size() < 6 || tokens[4].text != "emit" || tokens[5].text != ":")
          throw ParseError(line_no, 0, "ego machine state must carry 'emit : <letters...>'");
        st.emit = letters_to_action(tokens, 6, tokens.size(), line_no);
      }
    } else if (head == "medge") {
      // medge <id> : <letters...> -> <to>
      if (tokens.size() < 5 || tokens[2].text != ":" || tokens[tokens.size() - 2].text != "->")
        throw ParseError(line_no, 0, "expected 'medge <id> : <letters...> -> <to>'");
      uint32_t id = parse_number(tokens[1], line_no, "machine state id");
      if (id >= machine.states.size())
        throw ParseError(line_no, tokens[1].column, "machine state id out of range");
      ActionSet act = letters_to_action(tokens, 3, tokens.size() - 2, line_no);
      uint32_t to = parse_number(tokens.back(), line_no, "target machine state");
      if (to >= machine.states.size())
        throw ParseError(line_no, tokens.back().column, "target machine state out of range");
      machine.states[id].edges.emplace_back(act, to);
    } else if (head == "stitch") {
      // informational; ignored on load
    } else {
      throw ParseError(line_no, tokens[0].column, "unknown directive '" + head + "'");
    }
  }
  if (!saw_header) throw ParseError(1, 0, "empty strategy file");
  if (machine.initial >= machine.states.size())
    throw ParseError(line_no, 0, "initial machine state out of range");
  return machine;
}

StrategyMachine parse_strategy_file(const std::string& path, const GameGraph& g) {
  return parse_strategy(read_text_file(path), g);
}

std::string format_report(const RunReport& report) {
  std::ostringstream os;
  os << "countsynth-report v1\n";
  os << "mode " << report.mode << " order " << report.order << " init " << report.init
     << " translate " << (report.translated ? "on" : "off") << '\n';
  os << "decision " << report.decision << '\n';
  os << "increments " << report.increments.size() << '\n';
  uint64_t total_situations = 0;
  for (size_t i = 0; i < report.increments.size(); ++i) {
    const IncrementRow& row = report.increments[i];
    os << "increment " << (i + 1) << " lengths";
    if (row.lengths.empty()) os << " -";
    for (const auto& [id, l] : row.lengths) os << ' ' << id << '=' << l;
    os << " situations " << row.situations << " sinks " << row.sink_states << " edges "
       << row.edges << " region " << row.region << " region-edges " << row.region_edges
       << " store " << row.store_after << " ms " << row.ms << " s " << row.ms / 1000.0 << '\n';
    total_situations += row.situations;
  }
  os << "total situations " << total_situations << " ms " << report.total_ms << " s "
     << report.total_ms / 1000.0 << '\n';
  if (report.increments.size() > 1)
    os << "note per-increment regions before the last are under-approximations of the full "
          "winning regions at those lengths\n";
  return os.str();
}

std::string format_bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << kBenchHeader << '\n';
  for (const BenchRow& row : rows)
    os << row.game << ',' << row.mode << ',' << row.decision << ',' << row.states << ','
       << row.edges << ',' << row.region << ',' << row.store << ',' << row.ms << '\n';
  return os.str();
}

BenchRow bench_row(const std::string& game, const std::string& mode, const SynthesisResult& r) {
  BenchRow row;
  row.game = game;
  row.mode = mode;
  row.decision = r.report.decision;
  if (!r.report.increments.empty()) {
    const IncrementRow& last = r.report.increments.back();
    row.states = last.situations + last.sink_states;
    row.edges = last.edges;
    row.region = last.region;
    row.store = last.store_after;
  }
  row.ms = r.report.total_ms;
  return row;
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file '" + path + "'");
  out << content;
  if (!out) throw InputError("error while writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace countsynth
