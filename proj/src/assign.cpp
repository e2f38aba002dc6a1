#include "mdsd/assign.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace mdsd {

int AssignmentModel::order_slot(OrderId id) const {
    auto it = std::lower_bound(orders.begin(), orders.end(), id);
    if (it == orders.end() || *it != id)
        throw std::runtime_error("assignment: trip references order " + std::to_string(id) +
                                 " outside the placed set");
    return static_cast<int>(it - orders.begin());
}

AssignmentModel build_model(const TripSet& trips, const std::vector<OrderId>& placed, Cost alpha) {
    AssignmentModel m;
    m.alpha = alpha;
    m.orders = placed;
    std::sort(m.orders.begin(), m.orders.end());
    m.covering.resize(m.orders.size());

    auto flat = trips.flatten();
    for (int i = 0; i < static_cast<int>(flat.size()); ++i) {
        const Trip& t = *flat[i];
        AssignmentModel::TripVar var;
        var.source = i;
        var.vehicle = t.vehicle;
        var.relative_cost = t.relative_cost;
        var.absolute_cost = t.cost;
        for (const Candidate& c : t.candidates) var.order_slots.push_back(m.order_slot(c.order));
        std::sort(var.order_slots.begin(), var.order_slots.end());
        int id = static_cast<int>(m.trips.size());
        auto vit = std::find(m.vehicles.begin(), m.vehicles.end(), t.vehicle);
        if (vit == m.vehicles.end()) {
            m.vehicles.push_back(t.vehicle);
            m.by_vehicle.emplace_back();
            vit = m.vehicles.end() - 1;
        }
        m.by_vehicle[vit - m.vehicles.begin()].push_back(id);
        for (int slot : var.order_slots) m.covering[slot].push_back(id);
        m.trips.push_back(std::move(var));
    }
    return m;
}

namespace {

std::vector<OrderId> uncovered_orders(const AssignmentModel& model,
                                      const std::vector<char>& covered) {
    std::vector<OrderId> out;
    for (std::size_t s = 0; s < model.orders.size(); ++s)
        if (!covered[s]) out.push_back(model.orders[s]);
    return out;
}

}  // namespace

Assignment greedy_warm_start(const AssignmentModel& model) {
    std::vector<int> order(model.trips.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ta = model.trips[a];
        const auto& tb = model.trips[b];
        if (ta.order_slots.size() != tb.order_slots.size())
            return ta.order_slots.size() > tb.order_slots.size();
        if (ta.absolute_cost != tb.absolute_cost) return ta.absolute_cost < tb.absolute_cost;
        return a < b;
    });

    Assignment out;
    std::vector<char> covered(model.orders.size(), 0);
    std::vector<char> used_vehicle(model.vehicles.size(), 0);
    Cost trip_cost = 0;
    for (int id : order) {
        const auto& t = model.trips[id];
        std::size_t vslot =
            std::find(model.vehicles.begin(), model.vehicles.end(), t.vehicle) -
            model.vehicles.begin();
        if (used_vehicle[vslot]) continue;
        bool clash = false;
        for (int s : t.order_slots)
            if (covered[s]) { clash = true; break; }
        if (clash) continue;
        used_vehicle[vslot] = 1;
        for (int s : t.order_slots) covered[s] = 1;
        out.chosen.push_back(t.source);
        trip_cost += t.relative_cost;
    }
    std::sort(out.chosen.begin(), out.chosen.end());
    out.rejected_now = uncovered_orders(model, covered);
    out.objective = trip_cost + model.alpha * static_cast<Cost>(out.rejected_now.size());
    out.proof = Assignment::Proof::Optimal;  // meaningless for the warm start itself
    return out;
}

namespace {

using SolverClock = std::chrono::steady_clock;

// Depth-first exact search over vehicles; each level picks one of the
// vehicle's usable trips or none. Lower bound per node: reject everything
// still uncovered, improved by each remaining vehicle's best trip saving
// (cost minus the rejection penalties it would absorb), floored at zero.
struct BranchAndBound {
    const AssignmentModel& model;
    std::vector<std::vector<int>> branch_order;  // by_vehicle, most attractive first
    SolverClock::time_point deadline;
    bool budget_hit = false;
    long long nodes = 0;

    std::vector<char> covered;
    std::vector<int> picks;  // trip id per vehicle slot, -1 = none
    Cost trip_cost = 0;
    int uncovered = 0;

    std::vector<int> best_picks;
    Cost best_obj = 0;
    bool have_dfs = false;  // incumbent found by this search (not the warm start)

    explicit BranchAndBound(const AssignmentModel& m) : model(m) {}

    bool usable(const AssignmentModel::TripVar& t) const {
        for (int s : t.order_slots)
            if (covered[s]) return false;
        return true;
    }

    Cost bound_from(std::size_t vslot) const {
        Cost b = trip_cost + model.alpha * static_cast<Cost>(uncovered);
        for (std::size_t v = vslot; v < model.vehicles.size(); ++v) {
            Cost best = 0;
            for (int id : branch_order[v]) {
                const auto& t = model.trips[id];
                if (!usable(t)) continue;
                Cost saving = t.relative_cost -
                              model.alpha * static_cast<Cost>(t.order_slots.size());
                best = std::min(best, saving);
            }
            b += best;
        }
        return b;
    }

    void dfs(std::size_t vslot) {
        if (budget_hit) return;
        if ((++nodes & 1023) == 0 && SolverClock::now() > deadline) {
            budget_hit = true;
            return;
        }
        if (vslot == model.vehicles.size()) {
            Cost obj = trip_cost + model.alpha * static_cast<Cost>(uncovered);
            if (obj < best_obj || (obj == best_obj && !have_dfs)) {
                best_obj = obj;
                best_picks = picks;
                have_dfs = true;
            }
            return;
        }
        Cost lb = bound_from(vslot);
        if (lb > best_obj || (lb == best_obj && have_dfs)) return;

        for (int id : branch_order[vslot]) {
            const auto& t = model.trips[id];
            if (!usable(t)) continue;
            picks[vslot] = id;
            trip_cost += t.relative_cost;
            uncovered -= static_cast<int>(t.order_slots.size());
            for (int s : t.order_slots) covered[s] = 1;
            dfs(vslot + 1);
            for (int s : t.order_slots) covered[s] = 0;
            uncovered += static_cast<int>(t.order_slots.size());
            trip_cost -= t.relative_cost;
            picks[vslot] = -1;
            if (budget_hit) return;
        }
        dfs(vslot + 1);
    }
};

}  // namespace

Assignment solve(const AssignmentModel& model, const Assignment& warm, TimeMs budget) {
    BranchAndBound bb(model);
    bb.deadline = SolverClock::now() + std::chrono::milliseconds(budget);
    bb.covered.assign(model.orders.size(), 0);
    bb.picks.assign(model.vehicles.size(), -1);
    bb.uncovered = static_cast<int>(model.orders.size());
    bb.best_obj = warm.objective;
    bb.best_picks.assign(model.vehicles.size(), -1);

    // Deterministic branch order: most attractive trip first (largest
    // penalty absorption net of cost), ties by variable id.
    bb.branch_order = model.by_vehicle;
    for (auto& list : bb.branch_order) {
        std::sort(list.begin(), list.end(), [&](int a, int b) {
            Cost sa = model.trips[a].relative_cost -
                      model.alpha * static_cast<Cost>(model.trips[a].order_slots.size());
            Cost sb = model.trips[b].relative_cost -
                      model.alpha * static_cast<Cost>(model.trips[b].order_slots.size());
            if (sa != sb) return sa < sb;
            return a < b;
        });
    }

    bb.dfs(0);

    Assignment out;
    if (!bb.have_dfs) {
        // Budget expired before any full leaf: fall back to the warm start.
        out = warm;
        out.proof = Assignment::Proof::IncumbentAtBudget;
        return out;
    }
    std::vector<char> covered(model.orders.size(), 0);
    for (std::size_t v = 0; v < model.vehicles.size(); ++v) {
        int id = bb.best_picks[v];
        if (id < 0) continue;
        out.chosen.push_back(model.trips[id].source);
        for (int s : model.trips[id].order_slots) covered[s] = 1;
    }
    std::sort(out.chosen.begin(), out.chosen.end());
    out.rejected_now = uncovered_orders(model, covered);
    out.objective = bb.best_obj;
    out.proof = bb.budget_hit ? Assignment::Proof::IncumbentAtBudget : Assignment::Proof::Optimal;
    return out;
}

Cost assignment_objective(const AssignmentModel& model, const Assignment& a) {
    Cost c = 0;
    std::vector<char> covered(model.orders.size(), 0);
    std::vector<char> used_vehicle(model.vehicles.size(), 0);
    for (int source : a.chosen) {
        const AssignmentModel::TripVar* var = nullptr;
        for (const auto& t : model.trips)
            if (t.source == source) { var = &t; break; }
        if (!var) throw std::runtime_error("assignment: chosen trip not in model");
        std::size_t vslot =
            std::find(model.vehicles.begin(), model.vehicles.end(), var->vehicle) -
            model.vehicles.begin();
        if (used_vehicle[vslot])
            throw std::runtime_error("assignment: vehicle assigned two trips");
        used_vehicle[vslot] = 1;
        for (int s : var->order_slots) {
            if (covered[s]) throw std::runtime_error("assignment: order covered twice");
            covered[s] = 1;
        }
        c += var->relative_cost;
    }
    int uncovered = 0;
    for (char f : covered)
        if (!f) ++uncovered;
    return c + model.alpha * static_cast<Cost>(uncovered);
}

void write_lp(const AssignmentModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("lp: cannot write " + path);
    char buf[128];
    out << "Minimize\n obj:";
    for (std::size_t i = 0; i < model.trips.size(); ++i) {
        std::snprintf(buf, sizeof buf, " %+.9g e%zu", model.trips[i].relative_cost, i);
        out << buf;
    }
    for (std::size_t s = 0; s < model.orders.size(); ++s) {
        std::snprintf(buf, sizeof buf, " %+.9g x%zu", model.alpha, s);
        out << buf;
    }
    out << "\nSubject To\n";
    for (std::size_t v = 0; v < model.vehicles.size(); ++v) {
        out << " veh_" << model.vehicles[v] << ":";
        for (std::size_t i = 0; i < model.by_vehicle[v].size(); ++i)
            out << (i ? " + e" : " e") << model.by_vehicle[v][i];
        out << " <= 1\n";
    }
    for (std::size_t s = 0; s < model.orders.size(); ++s) {
        out << " ord_" << model.orders[s] << ":";
        for (int id : model.covering[s]) out << " e" << id << " +";
        out << " x" << s << " = 1\n";
    }
    out << "Binary\n";
    for (std::size_t i = 0; i < model.trips.size(); ++i) out << " e" << i;
    for (std::size_t s = 0; s < model.orders.size(); ++s) out << " x" << s;
    out << "\nEnd\n";
}

}  // namespace mdsd
