#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mdsd/config.hpp"
#include "mdsd/network.hpp"
#include "mdsd/types.hpp"

namespace mdsd {

enum class OrderStatus { Unknown, Placed, Loaded, Delivered, Ignored };

const char* to_string(OrderStatus s);

struct Order {
    OrderId id = kNoOrder;
    TimeMs release = 0;  // original release, anchors user cost
    NodeId destination = kNoNode;
    OrderStatus status = OrderStatus::Unknown;
    int reinsert_count = 0;
    TimeMs effective_release = 0;  // re-anchored on reinsertion, drives feasibility
    VehicleId loaded_by = kNoVehicle;
    TimeMs pickup_time = kNoTime;   // completion of this order's loading slice
    TimeMs dropoff_time = kNoTime;  // completion of service at the destination
};

struct Candidate {
    OrderId order = kNoOrder;
    NodeId depot = kNoNode;

    friend bool operator==(const Candidate&, const Candidate&) = default;
    friend auto operator<=>(const Candidate&, const Candidate&) = default;
};

enum class StopAction { Pickup, Deliver, Relocate };

struct Stop {
    NodeId location = kNoNode;
    StopAction action = StopAction::Relocate;
    std::vector<OrderId> orders;  // pickup set (ascending ids) or a single delivery
    TimeMs arrival = kNoTime;
    TimeMs departure = kNoTime;
};

struct RoutePlan {
    std::vector<Stop> stops;

    bool empty() const { return stops.empty(); }
};

struct Vehicle {
    VehicleId id = kNoVehicle;

    // Position: at a node, or en route along a directed arc.
    NodeId at = kNoNode;
    bool en_route = false;
    NodeId arc_from = kNoNode;
    NodeId arc_to = kNoNode;
    TimeMs arc_remaining = 0;
    TimeMs arc_total = 0;

    // In-progress load/service slice; fixed, completes before replanning.
    bool busy = false;
    TimeMs busy_until = 0;
    StopAction busy_action = StopAction::Relocate;
    OrderId busy_order = kNoOrder;

    std::vector<OrderId> loaded;  // ascending order ids
    RoutePlan plan;
    std::size_t stop_cursor = 0;  // next stop to execute
    int slice_cursor = 0;         // next action slice within the current stop
    TimeMs next_depart = 0;       // departure toward the next stop
    NodeId reloc_target = kNoNode;

    // Driven totals, split by purpose.
    TimeMs drive_service_ms = 0;
    TimeMs drive_reloc_ms = 0;

    bool idle() const { return loaded.empty() && !busy && stop_cursor >= plan.stops.size(); }
};

struct Trip {
    VehicleId vehicle = kNoVehicle;
    std::vector<Candidate> candidates;  // sorted, all sharing one depot
    RoutePlan route;
    Cost cost = 0;           // gamma for the full route
    Cost relative_cost = 0;  // gamma minus the vehicle's loaded-only cost

    NodeId depot() const { return candidates.empty() ? kNoNode : candidates.front().depot; }
};

// All demand with id lookup. Ids must be unique; any integer ids work.
class OrderBook {
public:
    void add(Order o);
    const Order& get(OrderId id) const;
    Order& get(OrderId id);
    bool has(OrderId id) const { return by_id_.count(id) != 0; }
    const std::vector<Order>& all() const { return orders_; }
    std::vector<Order>& all() { return orders_; }
    std::size_t size() const { return orders_.size(); }

private:
    std::vector<Order> orders_;
    std::unordered_map<OrderId, std::size_t> by_id_;
};

struct SimState {
    TimeMs clock = 0;
    std::vector<Vehicle> fleet;
    OrderBook orders;
    // Explicit membership sets, kept sorted; audited against statuses.
    std::vector<OrderId> placed;
    std::vector<OrderId> loaded;
    std::vector<OrderId> delivered;
    std::vector<OrderId> ignored;
    std::size_t next_release = 0;  // cursor into the release-sorted demand

    const Order& order(OrderId id) const { return orders.get(id); }
    Order& order(OrderId id) { return orders.get(id); }

    void make_placed(OrderId id);
    void make_loaded(OrderId id, VehicleId v, TimeMs pickup_done);
    void make_delivered(OrderId id, TimeMs dropoff_done);
    void make_ignored(OrderId id);
    void make_reinserted(OrderId id, TimeMs new_release);

    // Verifies the order-set partition and per-order bookkeeping; returns a
    // diagnostic for the first violation, empty when consistent.
    std::string audit() const;
};

// Earliest physically possible delivery completion, anchored at the
// effective release (re-anchored on reinsertion).
TimeMs ideal_time(const Order& o, const Network& net, const ScenarioConfig& cfg);

// Same formula anchored at the original release; this is the delay reference
// for all costs and KPIs.
TimeMs ideal_time_original(const Order& o, const Network& net, const ScenarioConfig& cfg);

// Feasibility deadline: the heuristic window from the effective release,
// capped by the hard service guarantee from the original release.
TimeMs latest_dropoff(const Order& o, const Network& net, const ScenarioConfig& cfg);

// Vehicle state reduced to what replanning may use: position, earliest
// departure (after any in-progress slice), committed deliveries, and load.
struct PlanningContext {
    bool en_route = false;
    NodeId node = kNoNode;  // position, or arc head when en_route
    NodeId arc_to = kNoNode;
    TimeMs arc_remaining = 0;
    TimeMs depart = 0;
    std::vector<OrderId> deliveries;  // mandatory: loaded plus any in-flight pickup
    int load = 0;

    TimeMs travel_to(NodeId target, const Network& net) const;
};

PlanningContext planning_context(const Vehicle& v, TimeMs now);

struct RouteEval {
    bool feasible = false;
    TimeMs travel = 0;      // total leg travel time from the current position
    TimeMs theta_sum = 0;   // summed delay over every order delivered en route
    Cost cost = 0;
    TimeMs completion = 0;  // departure from the last stop
};

// Times the stop skeleton in place and checks every constraint: delivery
// deadlines, capacity bounds, pickup-before-delivery, and (when disabled)
// no pickups while carrying load. Throws std::logic_error on malformed
// plans (deliveries of unknown orders); constraint violations return
// feasible=false.
RouteEval evaluate_route(RoutePlan& plan, const PlanningContext& ctx, const SimState& state,
                         const Network& net, const ScenarioConfig& cfg);

}  // namespace mdsd
