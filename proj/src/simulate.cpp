#include "countsynth/simulate.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "countsynth/rng.hpp"

namespace countsynth {

std::string SimulationReport::text() const {
  std::ostringstream os;
  os << "simulation runs " << runs << " steps " << steps << '\n';
  os << "ego-violations " << runs_with_ego_violation << '\n';
  os << "unsafe-visits " << total_unsafe_visits << '\n';
  os << "target-reached " << runs_reaching_target << " of " << runs << '\n';
  os << "max-accept-gap " << max_accept_gap << '\n';
  return os.str();
}

SimulationReport simulate(const GameGraph& g, const WinningCondition& win,
                          const std::vector<CountingConstraint>& constraints,
                          const StrategyMachine& machine, const SimulationParams& params) {
  win.check(g);
  SimulationReport report;
  report.runs = params.runs;
  report.steps = params.steps;
  if (machine.states.empty()) throw InputError("simulate: empty strategy machine");

  for (uint64_t run = 0; run < params.runs; ++run) {
    SplitMix64 rng(params.seed + run);
    ConstraintMonitor monitor(constraints, g.alphabet());
    RunObservation obs;

    uint32_t m = machine.initial;
    StateId at = machine.states[m].base;
    if (at != g.initial())
      throw StateError("simulate: machine does not start at the initial state");

    uint64_t since_accept = 0;
    std::deque<uint32_t> trailing_colors;
    size_t trailing_window = machine.size() + 2;
    auto observe_state = [&](StateId s) {
      switch (win.kind) {
        case WinKind::Safety:
        case WinKind::CoBuchi:
          if (!win.states.test(s)) obs.unsafe_visits++;
          break;
        case WinKind::Reachability:
          if (win.states.test(s)) obs.target_reached = true;
          break;
        case WinKind::Buchi:
          if (win.states.test(s)) {
            since_accept = 0;
          } else {
            since_accept++;
            obs.max_accept_gap = std::max(obs.max_accept_gap, since_accept);
          }
          break;
        case WinKind::Parity:
          trailing_colors.push_back(win.coloring[s]);
          if (trailing_colors.size() > trailing_window) trailing_colors.pop_front();
          break;
      }
    };
    observe_state(at);

    for (uint64_t step = 0; step < params.steps; ++step) {
      const StrategyMachine::State& state = machine.states[m];
      Player mover = g.owner(at);
      ActionSet act;
      if (mover == Player::Ego) {
        act = state.emit;
        if (!g.successor(at, act))
          throw StateError("simulate: machine emits an illegal move at state " +
                           g.state_name(at));
      } else {
        // Uniform choice among constraint-compliant adversary moves.
        std::vector<ActionSet> compliant;
        for (const GameGraph::Edge& e : g.out(at))
          if (monitor.move_keeps_satisfiable(Player::Adv, e.action))
            compliant.push_back(e.action);
        if (compliant.empty())
          throw StateError("simulate: adversary has no compliant move at state " +
                           g.state_name(at) + "; the game violates rationality");
        act = compliant[rng.below(compliant.size())];
      }

      monitor.step(mover, act);
      m = machine.step(m, act);  // throws if the machine is not total here
      StateId expected = *g.successor(at, act);
      at = machine.states[m].base;
      if (at != expected)
        throw StateError("simulate: machine transition disagrees with the game graph");
      observe_state(at);

      if (!obs.ego_violation) {
        for (size_t i = 0; i < monitor.size(); ++i) {
          if (monitor.constraint(i).player == Player::Ego && monitor.verdict(i).violated()) {
            obs.ego_violation = true;
            obs.violated_id = monitor.constraint(i).id;
            break;
          }
        }
      }
    }

    if (win.kind == WinKind::Parity) {
      uint32_t mc = UINT32_MAX;
      for (uint32_t c : trailing_colors) mc = std::min(mc, c);
      obs.trailing_min_color = mc;
    }
    if (obs.ego_violation) report.runs_with_ego_violation++;
    report.total_unsafe_visits += obs.unsafe_visits;
    if (obs.target_reached) report.runs_reaching_target++;
    report.max_accept_gap = std::max(report.max_accept_gap, obs.max_accept_gap);
    report.per_run.push_back(std::move(obs));
  }
  return report;
}

}  // namespace countsynth
