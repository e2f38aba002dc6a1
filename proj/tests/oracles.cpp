#include "oracles.hpp"

#include <algorithm>
#include <numeric>

namespace mdsd::oracle {

std::vector<TimeMs> bellman_ford(int n, const std::vector<Edge>& edges, int src) {
    std::vector<TimeMs> dist(n, kInfTime);
    dist[src] = 0;
    for (int pass = 0; pass < n; ++pass) {
        bool changed = false;
        for (const Edge& e : edges) {
            if (dist[e.from] >= kInfTime) continue;
            if (dist[e.from] + e.w < dist[e.to]) {
                dist[e.to] = dist[e.from] + e.w;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return dist;
}

SequenceResult best_sequence_by_enumeration(const PlanningContext& ctx,
                                            const std::vector<Candidate>& cands,
                                            const SimState& state, const Network& net,
                                            const ScenarioConfig& cfg) {
    SequenceResult res;
    std::vector<OrderId> new_orders;
    NodeId depot = kNoNode;
    for (const Candidate& c : cands) {
        new_orders.push_back(c.order);
        depot = c.depot;
    }
    std::sort(new_orders.begin(), new_orders.end());
    const int q = static_cast<int>(new_orders.size());

    std::vector<OrderId> all = ctx.deliveries;
    all.insert(all.end(), new_orders.begin(), new_orders.end());
    std::sort(all.begin(), all.end());
    const int total = static_cast<int>(all.size());

    auto is_new = [&](OrderId id) {
        return std::binary_search(new_orders.begin(), new_orders.end(), id);
    };

    // permutation of all deliveries x pickup position among them
    std::vector<int> perm(total);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        int first_new = total;
        for (int i = 0; i < total; ++i)
            if (is_new(all[perm[i]])) {
                first_new = i;
                break;
            }
        int max_pick_pos = q == 0 ? -1 : first_new;  // pickup before every new delivery
        for (int pick = 0; pick <= std::max(0, max_pick_pos); ++pick) {
            if (q == 0 && pick > 0) break;
            // simulate
            TimeMs t = ctx.depart;
            NodeId pos = kNoNode;
            bool at_start = true;
            int load = ctx.load;
            TimeMs travel = 0, theta = 0;
            bool ok = true;
            auto move = [&](NodeId target) {
                TimeMs leg = at_start ? ctx.travel_to(target, net) : net.travel_time(pos, target);
                at_start = false;
                travel += leg;
                t += leg;
                pos = target;
            };
            for (int i = 0; i <= total && ok; ++i) {
                if (q > 0 && i == pick) {
                    if (!cfg.pre_empty_allowed && load > 0) { ok = false; break; }
                    move(depot);
                    load += q;
                    if (load > cfg.capacity) { ok = false; break; }
                    t += cfg.load_time * q;
                }
                if (i == total) break;
                const Order& o = state.order(all[perm[i]]);
                if (is_new(o.id) && i < pick) { ok = false; break; }
                move(o.destination);
                t += cfg.service_time;
                if (t > latest_dropoff(o, net, cfg)) { ok = false; break; }
                load -= 1;
                theta += t - ideal_time_original(o, net, cfg);
            }
            if (!ok) continue;
            res.feasible_sequences += 1;
            Cost c = route_cost(theta, travel, cfg.cost_weight);
            if (!res.feasible || c < res.cost) {
                res.feasible = true;
                res.cost = c;
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return res;
}

namespace {

void enumerate_assignments(const AssignmentModel& model, std::size_t vslot,
                           std::vector<char>& covered, Cost cost, Cost& best) {
    if (vslot == model.vehicles.size()) {
        Cost uncovered = 0;
        for (char c : covered)
            if (!c) uncovered += model.alpha;
        best = std::min(best, cost + uncovered);
        return;
    }
    enumerate_assignments(model, vslot + 1, covered, cost, best);  // no trip
    for (int id : model.by_vehicle[vslot]) {
        const auto& t = model.trips[id];
        bool clash = false;
        for (int s : t.order_slots)
            if (covered[s]) { clash = true; break; }
        if (clash) continue;
        for (int s : t.order_slots) covered[s] = 1;
        enumerate_assignments(model, vslot + 1, covered, cost + t.relative_cost, best);
        for (int s : t.order_slots) covered[s] = 0;
    }
}

}  // namespace

Cost assignment_by_enumeration(const AssignmentModel& model) {
    std::vector<char> covered(model.orders.size(), 0);
    Cost best = model.alpha * static_cast<Cost>(model.orders.size()) + 1;
    // "reject everything" is one of the enumerated completions, so the
    // sentinel above is always beaten
    enumerate_assignments(model, 0, covered, 0, best);
    return best;
}

std::vector<std::vector<std::vector<Candidate>>> trip_families_by_enumeration(
    const SimState& state, const std::vector<Candidate>& raw, const Network& net,
    const ScenarioConfig& cfg) {
    std::vector<Candidate> cands = raw;
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    const int n = static_cast<int>(cands.size());

    std::vector<std::vector<std::vector<Candidate>>> out(state.fleet.size());
    for (std::size_t slot = 0; slot < state.fleet.size(); ++slot) {
        PlanningContext ctx = planning_context(state.fleet[slot], state.clock);
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<Candidate> subset;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) subset.push_back(cands[i]);
            if (static_cast<int>(subset.size()) > cfg.max_trip_size) continue;
            bool same_depot = true, distinct = true;
            for (std::size_t i = 1; i < subset.size(); ++i) {
                if (subset[i].depot != subset[0].depot) same_depot = false;
                for (std::size_t j = 0; j < i; ++j)
                    if (subset[i].order == subset[j].order) distinct = false;
            }
            if (!same_depot || !distinct) continue;
            auto res = best_sequence_by_enumeration(ctx, subset, state, net, cfg);
            if (res.feasible) out[slot].push_back(subset);
        }
        std::sort(out[slot].begin(), out[slot].end());
    }
    return out;
}

TimeMs k_center_two_exhaustive(const Network& net) {
    const auto& nodes = net.node_ids();
    TimeMs best = kInfTime;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            TimeMs worst = 0;
            for (NodeId n : nodes) {
                TimeMs d = std::min(net.travel_time(nodes[i], n), net.travel_time(nodes[j], n));
                worst = std::max(worst, d);
            }
            best = std::min(best, worst);
        }
    }
    return best;
}

}  // namespace mdsd::oracle
