#include "mdsd/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "mdsd/tripgen.hpp"

namespace mdsd {

namespace {

// Remaining committed stops of the vehicle's plan: everything from the
// execution cursor on, minus relocation waypoints and action slices that
// already ran or are in flight.
std::vector<Stop> committed_skeleton(const Vehicle& v) {
    std::vector<Stop> out;
    for (std::size_t i = v.stop_cursor; i < v.plan.stops.size(); ++i) {
        Stop s = v.plan.stops[i];
        if (s.action == StopAction::Relocate) continue;
        if (i == v.stop_cursor && v.slice_cursor > 0) {
            s.orders.erase(s.orders.begin(), s.orders.begin() + v.slice_cursor);
            if (s.orders.empty()) continue;
        }
        s.arrival = kNoTime;
        s.departure = kNoTime;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

std::optional<Insertion> find_best_vehicle(const Order& o, const SimState& state,
                                           const Network& net, const ScenarioConfig& cfg) {
    std::vector<Candidate> cands = candidates_for_order(o, net, cfg.depots_per_order);
    std::optional<Insertion> best;
    for (const Vehicle& v : state.fleet) {
        PlanningContext ctx = planning_context(v, state.clock);
        std::vector<Stop> base = committed_skeleton(v);
        Cost base_cost = 0;
        {
            RoutePlan plan;
            plan.stops = base;
            RouteEval ev = evaluate_route(plan, ctx, state, net, cfg);
            if (!ev.feasible)
                throw std::logic_error("greedy: committed plan of vehicle " +
                                       std::to_string(v.id) + " became infeasible");
            base_cost = ev.cost;
        }
        const int n = static_cast<int>(base.size());
        for (const Candidate& c : cands) {
            Stop pick;
            pick.location = c.depot;
            pick.action = StopAction::Pickup;
            pick.orders = {o.id};
            Stop del;
            del.location = o.destination;
            del.action = StopAction::Deliver;
            del.orders = {o.id};
            for (int i = 0; i <= n; ++i) {
                for (int j = i; j <= n; ++j) {
                    RoutePlan plan;
                    plan.stops.reserve(base.size() + 2);
                    for (int k = 0; k < i; ++k) plan.stops.push_back(base[k]);
                    plan.stops.push_back(pick);
                    for (int k = i; k < j; ++k) plan.stops.push_back(base[k]);
                    plan.stops.push_back(del);
                    for (int k = j; k < n; ++k) plan.stops.push_back(base[k]);
                    RouteEval ev = evaluate_route(plan, ctx, state, net, cfg);
                    if (!ev.feasible) continue;
                    Cost added = ev.cost - base_cost;
                    if (!best || added < best->added_cost) {
                        Insertion ins;
                        ins.vehicle = v.id;
                        ins.plan = std::move(plan);
                        ins.added_cost = added;
                        best = std::move(ins);
                    }
                }
            }
        }
    }
    return best;
}

DayResult run_greedy_day(const ScenarioConfig& cfg, const Network& net,
                         const std::vector<Order>& demand) {
    cfg.validate();
    SimState state = initial_state(cfg, net, demand);
    EventLog log;

    auto relocate_idle = [&]() { idle_return(state, net, cfg, log); };

    const auto& all = state.orders.all();
    std::size_t next = 0;
    while (next < all.size()) {
        TimeMs t = all[next].release;
        propagate(state, t, net, cfg, log);  // also places every order due at t
        while (next < all.size() && all[next].release <= t) {
            OrderId id = all[next].id;
            ++next;
            if (state.order(id).status != OrderStatus::Placed)
                throw std::logic_error("greedy: order not placed at its release");
            auto ins = find_best_vehicle(state.order(id), state, net, cfg);
            if (!ins) {
                state.make_ignored(id);
                log.append({t, EventKind::Ignored, id});
                continue;
            }
            Vehicle& v = state.fleet[ins->vehicle];
            PlanningContext ctx = planning_context(v, state.clock);
            v.plan = std::move(ins->plan);
            v.stop_cursor = 0;
            v.slice_cursor = 0;
            v.next_depart = ctx.depart;
            v.reloc_target = kNoNode;
        }
        relocate_idle();
    }

    // Drain: run out the committed plans, then let vehicles return until the
    // day formally ends.
    while (!state.loaded.empty() || !state.placed.empty() ||
           std::any_of(state.fleet.begin(), state.fleet.end(),
                       [](const Vehicle& v) { return v.busy; })) {
        propagate(state, state.clock + cfg.epoch_length, net, cfg, log);
    }
    relocate_idle();
    while (state.clock < cfg.day_end)
        propagate(state, std::min(cfg.day_end, state.clock + cfg.epoch_length), net, cfg, log);

    finish_day(state, log);
    return summarize(std::move(log), std::move(state), net, cfg, demand, 0, 0);
}

}  // namespace mdsd
