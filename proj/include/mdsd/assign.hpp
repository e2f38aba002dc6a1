#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdsd/model.hpp"
#include "mdsd/tripgen.hpp"

namespace mdsd {

// Trip-vehicle assignment as a binary program: one variable per generated
// (trip, vehicle) pair, one rejection variable per placed order. Per-vehicle
// rows cap each vehicle at one trip; per-order rows force each order into
// exactly one chosen trip or its rejection variable. Always feasible
// (reject everything).
struct AssignmentModel {
    struct TripVar {
        int source = -1;  // index into the flattened TripSet
        VehicleId vehicle = kNoVehicle;
        std::vector<int> order_slots;  // row indices of the covered orders
        Cost relative_cost = 0;
        Cost absolute_cost = 0;
    };

    std::vector<TripVar> trips;
    std::vector<OrderId> orders;  // per-order rows, ascending id
    Cost alpha = 0;
    std::vector<VehicleId> vehicles;              // vehicles with at least one trip
    std::vector<std::vector<int>> by_vehicle;     // trip variable ids per vehicles[] slot
    std::vector<std::vector<int>> covering;       // trip variable ids per order slot

    int order_slot(OrderId id) const;
};

struct Assignment {
    enum class Proof { Optimal, IncumbentAtBudget };

    // source indices into the flattened TripSet, at most one per vehicle
    std::vector<int> chosen;
    std::vector<OrderId> rejected_now;  // orders with no chosen candidate this epoch
    Cost objective = 0;
    Proof proof = Proof::Optimal;
};

AssignmentModel build_model(const TripSet& trips, const std::vector<OrderId>& placed, Cost alpha);

// Largest trips first, ties by increasing absolute cost; accepts a trip iff
// its vehicle and all of its orders are still unassigned. The result is
// feasible for the model and seeds the exact search.
Assignment greedy_warm_start(const AssignmentModel& model);

// Exact search (depth-first over vehicles with a combinatorial lower bound)
// seeded with the warm start as incumbent. Returns the optimum with
// proof=Optimal when the search closes within the budget, otherwise the best
// incumbent found. The returned optimum is canonical: it does not depend on
// the warm start.
Assignment solve(const AssignmentModel& model, const Assignment& warm, TimeMs budget);

// Recomputes the objective of an assignment from the raw model (audit path).
Cost assignment_objective(const AssignmentModel& model, const Assignment& a);

// Dump in LP text format for cross-checking with external solvers.
void write_lp(const AssignmentModel& model, const std::string& path);

}  // namespace mdsd
