#pragma once

#include <functional>
#include <vector>

#include "mdsd/assign.hpp"
#include "mdsd/eventlog.hpp"
#include "mdsd/model.hpp"
#include "mdsd/network.hpp"
#include "mdsd/report.hpp"
#include "mdsd/tripgen.hpp"

namespace mdsd {

// Reinsertion limit: how many service windows of length `heuristic` fit in
// the real guarantee. Throws if heuristic <= 0 or real < heuristic.
int reinsert_limit(TimeMs real, TimeMs heuristic);

struct RunOptions {
    int workers = 1;
    // Called after each epoch's propagation with the epoch index.
    std::function<void(const SimState&, int)> epoch_hook;
    // When set, every epoch's assignment model is dumped as <dir>/model_<t>.lp.
    std::string lp_dump_dir;
};

struct EpochOutcome {
    Assignment assignment;
    int trips_generated = 0;
    int reinserted = 0;
    int ignored = 0;
    bool proven_optimal = true;
};

// One rolling-horizon decision at state.clock: candidates for the placed
// pool, trip generation, warm-started exact assignment, plan installation.
// Orders provably unserveable are reinserted (fresh release) or ignored.
EpochOutcome decision_epoch(SimState& state, const Network& net, const ScenarioConfig& cfg,
                            EventLog& log, int workers = 1, const std::string& lp_dump_dir = {});

// Sends every idle vehicle toward its nearest depot; interruptible.
void idle_return(SimState& state, const Network& net, const ScenarioConfig& cfg, EventLog& log);

// Advances the world to `until`: vehicles execute plans (arc by arc, action
// slice by action slice), new orders become placed at their release times.
void propagate(SimState& state, TimeMs until, const Network& net, const ScenarioConfig& cfg,
               EventLog& log);

struct DayResult {
    EventLog log;
    KpiReport kpis;
    SimState final_state;
    Cost objective = 0;     // (1-beta)*sum delay + beta*sum drive time + alpha*|ignored|
    Cost delay_cost = 0;
    Cost travel_cost = 0;
    Cost penalty_cost = 0;
    int epochs = 0;
    int optimal_epochs = 0;
};

// Builds the initial state (vehicles empty, round-robin over depots) and
// runs decision/idle-return/propagate cycles. Epochs continue past day_end
// until every order is delivered or ignored; relocations in progress at the
// final close are cut off. Aborts on a failed terminal audit.
DayResult run_day(const ScenarioConfig& cfg, const Network& net, const std::vector<Order>& demand,
                  const RunOptions& opts = {});

// Shared by the engine and the greedy baseline.
SimState initial_state(const ScenarioConfig& cfg, const Network& net,
                       const std::vector<Order>& demand);
void finish_day(SimState& state, EventLog& log);
DayResult summarize(EventLog log, SimState state, const Network& net, const ScenarioConfig& cfg,
                    const std::vector<Order>& demand, int epochs, int optimal_epochs);

}  // namespace mdsd
