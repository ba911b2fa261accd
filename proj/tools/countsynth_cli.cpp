#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "countsynth/engine.hpp"
#include "countsynth/generator.hpp"
#include "countsynth/io.hpp"
#include "countsynth/simulate.hpp"

using namespace countsynth;

namespace {

int cmd_validate(const std::string& path) {
  ParsedGame game = parse_game_file(path);
  ValidationReport rationality = validate_rationality(game.graph, game.constraints);
  if (!rationality.valid()) {
    std::cerr << path << ": " << rationality.summary() << "\n";
    return 1;
  }
  std::cout << path << ": valid (" << game.graph.state_count() << " states, "
            << game.graph.transition_count() << " transitions, " << game.constraints.size()
            << " constraints)\n";
  return 0;
}

int cmd_solve(const std::string& path, const std::string& mode, const std::string& order,
              const std::string& init, bool no_translate, const std::string& strategy_out,
              const std::string& report_out) {
  ParsedGame game = parse_game_file(path);
  EngineOptions options;
  options.translate = !no_translate;
  options.order = order == "alternating" ? IncrementOrder::Alternating : IncrementOrder::Sequential;
  options.init = init == "sum-k" ? InitMode::SumK : InitMode::Minimal;

  SynthesisResult result = mode == "direct"
                               ? run_direct(game.graph, game.win, game.constraints, options)
                               : run_incremental(game.graph, game.win, game.constraints, options);

  std::string report = format_report(result.report);
  std::cout << report;
  if (!report_out.empty()) write_text_file(report_out, report);
  if (result.strategy && !strategy_out.empty())
    write_text_file(strategy_out, serialize_strategy(*result.strategy, game.graph));
  return 0;  // NOT_WINNABLE is a result, not a failure
}

int cmd_simulate(const std::string& path, const std::string& strategy_path, uint64_t steps,
                 uint64_t runs, uint64_t seed) {
  ParsedGame game = parse_game_file(path);
  StrategyMachine machine = parse_strategy_file(strategy_path, game.graph);
  SimulationReport report =
      simulate(game.graph, game.win, game.constraints, machine, {steps, runs, seed});
  std::cout << report.text();
  return report.runs_with_ego_violation == 0 ? 0 : 1;
}

int cmd_bench(uint32_t states, uint32_t constraints, uint64_t seed, uint32_t count,
              uint32_t max_window, uint32_t max_bound, const std::string& out) {
  std::vector<BenchRow> rows;
  for (uint32_t i = 0; i < count; ++i) {
    GeneratorParams params;
    params.states = states;
    params.ego_min_constraints = constraints;
    params.max_window = max_window;
    params.min_window = std::min(max_window, 3u);
    params.max_bound = max_bound;
    params.branching = 3;
    params.seed = seed + i;
    std::string game_id = "g" + std::to_string(params.seed);
    ParsedGame game = parse_game(generate_random_game(params));

    EngineOptions seq, alt;
    alt.order = IncrementOrder::Alternating;
    rows.push_back(bench_row(game_id, "sequential",
                             run_incremental(game.graph, game.win, game.constraints, seq)));
    rows.push_back(bench_row(game_id, "alternating",
                             run_incremental(game.graph, game.win, game.constraints, alt)));
    rows.push_back(
        bench_row(game_id, "direct", run_direct(game.graph, game.win, game.constraints)));
  }
  std::string csv = format_bench_csv(rows);
  if (out.empty())
    std::cout << csv;
  else
    write_text_file(out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"countsynth: solves two-player games with window counting constraints by "
               "incremental constraint-length synthesis"};
  app.require_subcommand(1);

  std::string game_path, strategy_path, strategy_out, report_out, out_path;
  std::string mode = "incremental", order = "sequential", init = "minimal";
  bool no_translate = false;
  uint64_t steps = 1000, runs = 100, seed = 1;
  uint32_t states = 10, constraints = 1, count = 10, max_window = 6, max_bound = 2;

  auto* validate = app.add_subcommand("validate", "parse a game file and check the arena and "
                                                  "rationality requirements");
  validate->add_option("game", game_path, "game file")->required();

  auto* solve = app.add_subcommand("solve", "synthesize a controller");
  solve->add_option("game", game_path, "game file")->required();
  solve->add_option("--mode", mode, "incremental|direct")
      ->check(CLI::IsMember({"incremental", "direct"}));
  solve->add_option("--order", order, "sequential|alternating")
      ->check(CLI::IsMember({"sequential", "alternating"}));
  solve->add_option("--init", init, "minimal|sum-k")->check(CLI::IsMember({"minimal", "sum-k"}));
  solve->add_flag("--no-translate", no_translate, "keep ego max constraints untranslated");
  solve->add_option("--strategy-out", strategy_out, "write the strategy machine here");
  solve->add_option("--report-out", report_out, "write the synthesis report here");

  auto* sim = app.add_subcommand("simulate", "play a stored strategy against a random "
                                             "constraint-compliant adversary");
  sim->add_option("game", game_path, "game file")->required();
  sim->add_option("--strategy", strategy_path, "strategy machine file")->required();
  sim->add_option("--steps", steps, "moves per run");
  sim->add_option("--runs", runs, "number of runs");
  sim->add_option("--seed", seed, "random seed");

  auto* bench = app.add_subcommand("bench", "generate games and compare solver modes");
  bench->add_option("--states", states, "states per game");
  bench->add_option("--constraints", constraints, "ego min constraints per game");
  bench->add_option("--seed", seed, "first seed");
  bench->add_option("--count", count, "number of games");
  bench->add_option("--max-window", max_window, "largest window length");
  bench->add_option("--max-k", max_bound, "largest bound");
  bench->add_option("--out", out_path, "CSV output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) return cmd_validate(game_path);
    if (app.got_subcommand(solve))
      return cmd_solve(game_path, mode, order, init, no_translate, strategy_out, report_out);
    if (app.got_subcommand(sim)) return cmd_simulate(game_path, strategy_path, steps, runs, seed);
    if (app.got_subcommand(bench))
      return cmd_bench(states, constraints, seed, count, max_window, max_bound, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
