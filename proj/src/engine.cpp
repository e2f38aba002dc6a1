#include "mdsd/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdsd {

int reinsert_limit(TimeMs real, TimeMs heuristic) {
    if (heuristic <= 0) throw std::runtime_error("reinsert_limit: heuristic delay must be > 0");
    if (real < heuristic)
        throw std::runtime_error("reinsert_limit: real delay must be >= heuristic delay");
    return static_cast<int>((real - (real % heuristic)) / heuristic);
}

namespace {

void install_plan(Vehicle& v, RoutePlan plan, TimeMs depart) {
    v.plan = std::move(plan);
    v.stop_cursor = 0;
    v.slice_cursor = 0;
    v.next_depart = depart;
}

// Orders committed to a vehicle by an in-progress loading slice; they are
// placed but no longer up for assignment.
std::vector<OrderId> inflight_pickups(const SimState& state) {
    std::vector<OrderId> out;
    for (const Vehicle& v : state.fleet)
        if (v.busy && v.busy_action == StopAction::Pickup) out.push_back(v.busy_order);
    std::sort(out.begin(), out.end());
    return out;
}

// Relaxed earliest completion: best vehicle, best candidate depot, free-flow
// travel, a single loading slice. Valid lower bound on any actual delivery.
TimeMs delivery_lower_bound(const Order& o, const SimState& state, const Network& net,
                            const ScenarioConfig& cfg) {
    std::vector<Candidate> cands = candidates_for_order(o, net, cfg.depots_per_order);
    TimeMs best = kInfTime;
    for (const Vehicle& v : state.fleet) {
        PlanningContext ctx = planning_context(v, state.clock);
        for (const Candidate& c : cands) {
            TimeMs t = ctx.depart + ctx.travel_to(c.depot, net) + cfg.load_time +
                       net.travel_time(c.depot, o.destination) + cfg.service_time;
            best = std::min(best, t);
        }
    }
    return best;
}

}  // namespace

EpochOutcome decision_epoch(SimState& state, const Network& net, const ScenarioConfig& cfg,
                            EventLog& log, int workers, const std::string& lp_dump_dir) {
    if (state.clock % cfg.epoch_length != 0)
        throw std::logic_error("decision_epoch: clock is not on the epoch grid");
    EpochOutcome out;

    std::vector<OrderId> committed = inflight_pickups(state);
    std::vector<OrderId> pool;
    for (OrderId id : state.placed)
        if (!std::binary_search(committed.begin(), committed.end(), id)) pool.push_back(id);

    std::vector<Candidate> cands;
    for (OrderId id : pool) {
        auto cs = candidates_for_order(state.order(id), net, cfg.depots_per_order);
        cands.insert(cands.end(), cs.begin(), cs.end());
    }

    TripSet trips = generate_trips(state, cands, net, cfg, workers);
    out.trips_generated = static_cast<int>(trips.generated_count);

    // Orders in no feasible trip: burn a reinsertion only when the relaxed
    // bound proves the deadline unreachable; feasible-but-unlucky orders are
    // simply retried next epoch.
    std::vector<char> in_some_trip_raw;
    {
        std::vector<OrderId> covered;
        for (const auto& bucket : trips.by_vehicle)
            for (const Trip& t : bucket)
                for (const Candidate& c : t.candidates) covered.push_back(c.order);
        std::sort(covered.begin(), covered.end());
        const int zeta = reinsert_limit(cfg.max_delay_real, cfg.max_delay_heuristic);
        std::vector<OrderId> still_pool;
        for (OrderId id : pool) {
            if (std::binary_search(covered.begin(), covered.end(), id)) {
                still_pool.push_back(id);
                continue;
            }
            Order& o = state.order(id);
            if (delivery_lower_bound(o, state, net, cfg) <= latest_dropoff(o, net, cfg)) {
                still_pool.push_back(id);  // hypothetically reachable, retry later
                continue;
            }
            if (o.reinsert_count < zeta) {
                state.make_reinserted(id, state.clock);
                log.append({state.clock, EventKind::Reinserted, id});
                out.reinserted += 1;
            } else {
                state.make_ignored(id);
                log.append({state.clock, EventKind::Ignored, id});
                out.ignored += 1;
            }
        }
        pool = std::move(still_pool);
    }

    AssignmentModel model = build_model(trips, pool, cfg.reject_penalty);
    if (!lp_dump_dir.empty())
        write_lp(model, lp_dump_dir + "/model_" + std::to_string(state.clock / 1000) + ".lp");
    Assignment warm = greedy_warm_start(model);
    out.assignment = solve(model, warm, cfg.ilp_budget);
    out.proven_optimal = out.assignment.proof == Assignment::Proof::Optimal;

    // Install chosen trips; every other vehicle falls back to the optimal
    // route over its committed deliveries (its plan net of unpicked orders).
    auto flat = trips.flatten();
    std::vector<int> chosen_by_slot(state.fleet.size(), -1);
    for (int source : out.assignment.chosen) {
        const Trip* t = flat[source];
        for (std::size_t slot = 0; slot < state.fleet.size(); ++slot)
            if (state.fleet[slot].id == t->vehicle) chosen_by_slot[slot] = source;
    }
    for (std::size_t slot = 0; slot < state.fleet.size(); ++slot) {
        Vehicle& v = state.fleet[slot];
        PlanningContext ctx = planning_context(v, state.clock);
        if (chosen_by_slot[slot] >= 0) {
            install_plan(v, flat[chosen_by_slot[slot]]->route, ctx.depart);
            v.reloc_target = kNoNode;
        } else {
            auto core = best_sequence(ctx, {}, state, net, cfg);
            if (!core)
                throw std::logic_error("epoch: vehicle cannot serve its committed load");
            bool has_stops = !core->route.stops.empty();
            install_plan(v, std::move(core->route), ctx.depart);
            if (has_stops) v.reloc_target = kNoNode;
        }
    }
    return out;
}

void idle_return(SimState& state, const Network& net, const ScenarioConfig& cfg, EventLog& log) {
    (void)cfg;
    for (Vehicle& v : state.fleet) {
        if (!v.idle()) continue;
        PlanningContext ctx = planning_context(v, state.clock);
        if (!ctx.en_route && net.is_depot(ctx.node)) {
            v.reloc_target = kNoNode;
            continue;
        }
        TimeMs best = kInfTime;
        NodeId target = kNoNode;
        for (NodeId d : net.depots()) {
            TimeMs t = ctx.travel_to(d, net);
            if (t < best || (t == best && d < target)) {
                best = t;
                target = d;
            }
        }
        if (target == kNoNode) continue;
        Stop s;
        s.location = target;
        s.action = StopAction::Relocate;
        s.arrival = ctx.depart + best;
        s.departure = s.arrival;
        RoutePlan plan;
        plan.stops.push_back(std::move(s));
        install_plan(v, std::move(plan), ctx.depart);
        if (v.reloc_target != target) {
            log.append({state.clock, EventKind::IdleReturn, kNoOrder, v.id, target});
            v.reloc_target = target;
        }
    }
}

namespace {

struct WindowEvents {
    std::vector<Event> events;
};

void step_vehicle(SimState& state, Vehicle& v, TimeMs wstart, TimeMs until,
                  const Network& net, const ScenarioConfig& cfg, WindowEvents& we) {
    while (true) {
        if (v.busy) {
            if (v.busy_until > until) return;
            TimeMs t = v.busy_until;
            if (v.busy_action == StopAction::Pickup) {
                state.make_loaded(v.busy_order, v.id, t);
                v.loaded.insert(
                    std::lower_bound(v.loaded.begin(), v.loaded.end(), v.busy_order),
                    v.busy_order);
                we.events.push_back({t, EventKind::Pickup, v.busy_order, v.id, v.at});
            } else {
                auto it = std::find(v.loaded.begin(), v.loaded.end(), v.busy_order);
                if (it == v.loaded.end())
                    throw std::logic_error("propagate: delivering an order that is not on board");
                v.loaded.erase(it);
                state.make_delivered(v.busy_order, t);
                we.events.push_back({t, EventKind::Dropoff, v.busy_order, v.id, v.at});
            }
            v.busy = false;
            v.busy_order = kNoOrder;
            // continue dwelling when the plan still points at this location
            if (v.stop_cursor < v.plan.stops.size()) {
                Stop& s = v.plan.stops[v.stop_cursor];
                if (!v.en_route && v.at == s.location && s.arrival <= t) {
                    if (v.slice_cursor < static_cast<int>(s.orders.size())) {
                        v.busy = true;
                        v.busy_action = s.action;
                        v.busy_order = s.orders[v.slice_cursor];
                        TimeMs per = s.action == StopAction::Pickup ? cfg.load_time
                                                                    : cfg.service_time;
                        v.busy_until = s.arrival + per * (v.slice_cursor + 1);
                        v.slice_cursor += 1;
                        continue;
                    }
                    if (t != s.departure)
                        throw std::logic_error("propagate: stop departure drifted off plan");
                    v.stop_cursor += 1;
                    v.slice_cursor = 0;
                    v.next_depart = s.departure;
                }
            }
            continue;
        }
        if (v.en_route) {
            TimeMs arrive = wstart + v.arc_remaining;
            if (arrive > until) {
                v.arc_remaining = arrive - until;
                return;
            }
            bool reloc = v.stop_cursor < v.plan.stops.size() &&
                         v.plan.stops[v.stop_cursor].action == StopAction::Relocate;
            Event de{arrive, EventKind::Drive, kNoOrder, v.id, v.arc_to};
            de.drive_ms = v.arc_total;
            de.reloc = reloc;
            we.events.push_back(de);
            (reloc ? v.drive_reloc_ms : v.drive_service_ms) += v.arc_total;
            v.at = v.arc_to;
            v.en_route = false;
            v.next_depart = arrive;
            wstart = arrive;  // subsequent arcs are timed from here
            continue;
        }
        if (v.stop_cursor >= v.plan.stops.size()) return;  // idle at a node
        Stop& s = v.plan.stops[v.stop_cursor];
        if (v.at == s.location) {
            if (v.next_depart != s.arrival && v.slice_cursor == 0)
                throw std::logic_error("propagate: stop arrival drifted off plan");
            if (s.orders.empty()) {  // relocation target reached
                v.stop_cursor += 1;
                v.slice_cursor = 0;
                v.next_depart = s.departure;
                continue;
            }
            v.busy = true;
            v.busy_action = s.action;
            v.busy_order = s.orders[v.slice_cursor];
            TimeMs per = s.action == StopAction::Pickup ? cfg.load_time : cfg.service_time;
            v.busy_until = s.arrival + per * (v.slice_cursor + 1);
            v.slice_cursor += 1;
            continue;
        }
        // move one leg toward the stop, arc by arc
        if (v.next_depart > until) return;
        std::vector<NodeId> path = net.shortest_path(v.at, s.location);
        bool reloc = s.action == StopAction::Relocate;
        TimeMs t = v.next_depart;
        std::size_t i = 1;
        for (; i < path.size(); ++i) {
            TimeMs w = net.arc_weight(path[i - 1], path[i]);
            if (t + w > until) {
                v.en_route = true;
                v.arc_from = path[i - 1];
                v.arc_to = path[i];
                v.arc_total = w;
                v.arc_remaining = t + w - until;
                return;
            }
            t += w;
            Event de{t, EventKind::Drive, kNoOrder, v.id, path[i]};
            de.drive_ms = w;
            de.reloc = reloc;
            we.events.push_back(de);
            (reloc ? v.drive_reloc_ms : v.drive_service_ms) += w;
        }
        v.at = s.location;
        v.next_depart = t;
    }
}

}  // namespace

void propagate(SimState& state, TimeMs until, const Network& net, const ScenarioConfig& cfg,
               EventLog& log) {
    if (until < state.clock) throw std::logic_error("propagate: until precedes the clock");
    WindowEvents we;
    for (Vehicle& v : state.fleet) step_vehicle(state, v, state.clock, until, net, cfg, we);

    // releases in (clock, until]
    const auto& all = state.orders.all();
    while (state.next_release < all.size()) {
        const Order& o = all[state.next_release];
        if (o.release > until) break;
        state.make_placed(o.id);
        we.events.push_back({o.release, EventKind::Placed, o.id});
        state.next_release += 1;
    }
    log.append_sorted(std::move(we.events));
    state.clock = until;
}

SimState initial_state(const ScenarioConfig& cfg, const Network& net,
                       const std::vector<Order>& demand) {
    if (net.depots().empty()) throw std::runtime_error("engine: network has no depots");
    SimState state;
    std::vector<Order> sorted = demand;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Order& a, const Order& b) {
        return a.release != b.release ? a.release < b.release : a.id < b.id;
    });
    for (Order& o : sorted) {
        o.status = OrderStatus::Unknown;
        o.effective_release = o.release;
        o.reinsert_count = 0;
        state.orders.add(o);
    }
    const auto& depots = net.depots();
    for (int i = 0; i < cfg.fleet_size; ++i) {
        Vehicle v;
        v.id = i;
        v.at = depots[i % depots.size()];
        state.fleet.push_back(std::move(v));
    }
    return state;
}

void finish_day(SimState& state, EventLog& log) {
    // Cut off relocations still in progress; account the partial arc.
    std::vector<Event> tail;
    for (Vehicle& v : state.fleet) {
        if (v.busy) throw std::logic_error("finish_day: vehicle still mid-action");
        if (v.en_route) {
            TimeMs driven = v.arc_total - v.arc_remaining;
            Event e{state.clock, EventKind::Halt, kNoOrder, v.id, v.arc_from};
            e.drive_ms = driven;
            e.reloc = true;
            tail.push_back(e);
            v.drive_reloc_ms += driven;
            v.en_route = false;
        }
        v.plan.stops.clear();
        v.stop_cursor = 0;
    }
    log.append_sorted(std::move(tail));
}

DayResult summarize(EventLog log, SimState state, const Network& net, const ScenarioConfig& cfg,
                    const std::vector<Order>& demand, int epochs, int optimal_epochs) {
    std::string audit = state.audit();
    if (!audit.empty()) throw std::logic_error("terminal audit: " + audit);
    if (!state.placed.empty() || !state.loaded.empty() ||
        state.next_release != state.orders.size())
        throw std::logic_error("terminal audit: unresolved orders at day close");
    if (state.delivered.size() + state.ignored.size() != state.orders.size())
        throw std::logic_error("terminal audit: delivered+ignored does not cover the demand");

    DayResult res;
    res.epochs = epochs;
    res.optimal_epochs = optimal_epochs;
    res.final_state = std::move(state);
    res.kpis = compute_kpis(log, demand, net, cfg);
    TimeMs theta = 0;
    for (OrderId id : res.final_state.delivered) {
        const Order& o = res.final_state.order(id);
        theta += o.dropoff_time - ideal_time_original(o, net, cfg);
    }
    TimeMs drive = 0;
    for (const Vehicle& v : res.final_state.fleet) drive += v.drive_service_ms + v.drive_reloc_ms;
    res.delay_cost = (1.0 - cfg.cost_weight) * ms_to_seconds(theta);
    res.travel_cost = cfg.cost_weight * ms_to_seconds(drive);
    res.penalty_cost = cfg.reject_penalty * static_cast<Cost>(res.final_state.ignored.size());
    res.objective = res.delay_cost + res.travel_cost + res.penalty_cost;
    res.log = std::move(log);
    return res;
}

DayResult run_day(const ScenarioConfig& cfg, const Network& net, const std::vector<Order>& demand,
                  const RunOptions& opts) {
    cfg.validate();
    SimState state = initial_state(cfg, net, demand);
    EventLog log;

    // Orders released at t=0 are visible to the first decision.
    {
        std::vector<Event> first;
        const auto& all = state.orders.all();
        while (state.next_release < all.size() && all[state.next_release].release <= 0) {
            state.make_placed(all[state.next_release].id);
            first.push_back({0, EventKind::Placed, all[state.next_release].id});
            state.next_release += 1;
        }
        log.append_sorted(std::move(first));
    }

    const long planned_epochs = cfg.day_end / cfg.epoch_length;
    const long hard_cap = planned_epochs * 4 + 1000;
    int epochs = 0, optimal = 0;
    for (long k = 0;; ++k) {
        if (k > hard_cap) throw std::logic_error("run_day: epoch loop failed to terminate");
        state.clock = k * cfg.epoch_length;
        log.append({state.clock, EventKind::Epoch});
        EpochOutcome eo = decision_epoch(state, net, cfg, log, opts.workers, opts.lp_dump_dir);
        idle_return(state, net, cfg, log);
        propagate(state, (k + 1) * cfg.epoch_length, net, cfg, log);
        epochs += 1;
        if (eo.proven_optimal) optimal += 1;
        if (opts.epoch_hook) opts.epoch_hook(state, static_cast<int>(k));

        bool demand_done = state.next_release == state.orders.size() && state.placed.empty() &&
                           state.loaded.empty() && !std::any_of(state.fleet.begin(),
                                                                state.fleet.end(),
                                                                [](const Vehicle& v) {
                                                                    return v.busy;
                                                                });
        if (state.clock >= cfg.day_end && demand_done) break;
    }
    finish_day(state, log);
    return summarize(std::move(log), std::move(state), net, cfg, demand, epochs, optimal);
}

}  // namespace mdsd
