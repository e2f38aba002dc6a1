#pragma once

#include <optional>
#include <vector>

#include "mdsd/engine.hpp"
#include "mdsd/model.hpp"
#include "mdsd/network.hpp"

namespace mdsd {

struct Insertion {
    VehicleId vehicle = kNoVehicle;
    RoutePlan plan;  // the vehicle's full updated plan
    Cost added_cost = 0;
};

// Cheapest feasible insertion of the order's pickup and delivery into any
// vehicle's current plan, over all candidate depots and stop positions.
// Committed stops keep their relative order; the fixed prefix and every
// existing constraint are honored. Empty when no vehicle can take the order.
std::optional<Insertion> find_best_vehicle(const Order& o, const SimState& state,
                                           const Network& net, const ScenarioConfig& cfg);

// Event-based greedy strategy: each order is assigned (or rejected) the
// moment it is placed; insertions are never revisited.
DayResult run_greedy_day(const ScenarioConfig& cfg, const Network& net,
                         const std::vector<Order>& demand);

}  // namespace mdsd
