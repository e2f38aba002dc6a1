#include "mdsd/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdsd {

const char* to_string(OrderStatus s) {
    switch (s) {
        case OrderStatus::Unknown: return "unknown";
        case OrderStatus::Placed: return "placed";
        case OrderStatus::Loaded: return "loaded";
        case OrderStatus::Delivered: return "delivered";
        case OrderStatus::Ignored: return "ignored";
    }
    return "?";
}

void OrderBook::add(Order o) {
    if (by_id_.count(o.id))
        throw std::runtime_error("demand: duplicate order id " + std::to_string(o.id));
    by_id_[o.id] = orders_.size();
    orders_.push_back(std::move(o));
}

const Order& OrderBook::get(OrderId id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw std::runtime_error("unknown order id " + std::to_string(id));
    return orders_[it->second];
}

Order& OrderBook::get(OrderId id) {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw std::runtime_error("unknown order id " + std::to_string(id));
    return orders_[it->second];
}

namespace {

void sorted_insert(std::vector<OrderId>& v, OrderId id) {
    v.insert(std::lower_bound(v.begin(), v.end(), id), id);
}

void sorted_erase(std::vector<OrderId>& v, OrderId id) {
    auto it = std::lower_bound(v.begin(), v.end(), id);
    if (it == v.end() || *it != id)
        throw std::logic_error("state: order " + std::to_string(id) + " missing from set");
    v.erase(it);
}

}  // namespace

void SimState::make_placed(OrderId id) {
    Order& o = order(id);
    if (o.status != OrderStatus::Unknown)
        throw std::logic_error("state: order " + std::to_string(id) + " placed twice");
    o.status = OrderStatus::Placed;
    sorted_insert(placed, id);
}

void SimState::make_loaded(OrderId id, VehicleId v, TimeMs pickup_done) {
    Order& o = order(id);
    if (o.status != OrderStatus::Placed)
        throw std::logic_error("state: pickup of non-placed order " + std::to_string(id));
    o.status = OrderStatus::Loaded;
    o.loaded_by = v;
    o.pickup_time = pickup_done;
    sorted_erase(placed, id);
    sorted_insert(loaded, id);
}

void SimState::make_delivered(OrderId id, TimeMs dropoff_done) {
    Order& o = order(id);
    if (o.status != OrderStatus::Loaded)
        throw std::logic_error("state: dropoff of non-loaded order " + std::to_string(id));
    o.status = OrderStatus::Delivered;
    o.dropoff_time = dropoff_done;
    sorted_erase(loaded, id);
    sorted_insert(delivered, id);
}

void SimState::make_ignored(OrderId id) {
    Order& o = order(id);
    if (o.status != OrderStatus::Placed)
        throw std::logic_error("state: ignoring non-placed order " + std::to_string(id));
    o.status = OrderStatus::Ignored;
    sorted_erase(placed, id);
    sorted_insert(ignored, id);
}

void SimState::make_reinserted(OrderId id, TimeMs new_release) {
    Order& o = order(id);
    if (o.status != OrderStatus::Placed)
        throw std::logic_error("state: reinserting non-placed order " + std::to_string(id));
    if (new_release < o.effective_release)
        throw std::logic_error("state: reinsertion moves release backwards");
    o.effective_release = new_release;
    o.reinsert_count += 1;
}

std::string SimState::audit() const {
    auto in = [](const std::vector<OrderId>& v, OrderId id) {
        return std::binary_search(v.begin(), v.end(), id);
    };
    std::size_t accounted = 0;
    for (const Order& o : orders.all()) {
        int member = (in(placed, o.id) ? 1 : 0) + (in(loaded, o.id) ? 1 : 0) +
                     (in(delivered, o.id) ? 1 : 0) + (in(ignored, o.id) ? 1 : 0);
        const char* want = to_string(o.status);
        if (o.status == OrderStatus::Unknown) {
            if (member != 0)
                return "order " + std::to_string(o.id) + " is unknown but in a membership set";
            continue;
        }
        if (member != 1)
            return "order " + std::to_string(o.id) + " (" + want + ") is in " +
                   std::to_string(member) + " sets";
        bool ok = (o.status == OrderStatus::Placed && in(placed, o.id)) ||
                  (o.status == OrderStatus::Loaded && in(loaded, o.id)) ||
                  (o.status == OrderStatus::Delivered && in(delivered, o.id)) ||
                  (o.status == OrderStatus::Ignored && in(ignored, o.id));
        if (!ok) return "order " + std::to_string(o.id) + " status " + want + " mismatches its set";
        if (o.effective_release < o.release)
            return "order " + std::to_string(o.id) + " effective release precedes release";
        ++accounted;
    }
    std::size_t set_total = placed.size() + loaded.size() + delivered.size() + ignored.size();
    if (set_total != accounted) return "membership sets disagree with order statuses";
    // Vehicle-side bookkeeping.
    for (const Vehicle& v : fleet) {
        for (OrderId id : v.loaded) {
            const Order& o = orders.get(id);
            if (o.status != OrderStatus::Loaded || o.loaded_by != v.id)
                return "vehicle " + std::to_string(v.id) + " carries order " + std::to_string(id) +
                       " with status " + to_string(o.status);
        }
    }
    return {};
}

namespace {

TimeMs nearest_depot_time(NodeId destination, const Network& net) {
    TimeMs best = kInfTime;
    for (NodeId d : net.depots()) best = std::min(best, net.travel_time(d, destination));
    if (best >= kInfTime) throw std::runtime_error("no depot reaches node " + std::to_string(destination));
    return best;
}

}  // namespace

TimeMs ideal_time(const Order& o, const Network& net, const ScenarioConfig& cfg) {
    return o.effective_release + cfg.load_time + nearest_depot_time(o.destination, net) +
           cfg.service_time;
}

TimeMs ideal_time_original(const Order& o, const Network& net, const ScenarioConfig& cfg) {
    return o.release + cfg.load_time + nearest_depot_time(o.destination, net) + cfg.service_time;
}

TimeMs latest_dropoff(const Order& o, const Network& net, const ScenarioConfig& cfg) {
    TimeMs base = cfg.load_time + nearest_depot_time(o.destination, net) + cfg.service_time;
    TimeMs hard = o.release + base + cfg.max_delay_real;
    TimeMs window = o.effective_release + base + cfg.max_delay_heuristic;
    return std::min(hard, window);
}

TimeMs PlanningContext::travel_to(NodeId target, const Network& net) const {
    if (en_route) return arc_remaining + net.travel_time(arc_to, target);
    return net.travel_time(node, target);
}

PlanningContext planning_context(const Vehicle& v, TimeMs now) {
    PlanningContext ctx;
    ctx.en_route = v.en_route;
    if (v.en_route) {
        ctx.node = v.arc_from;
        ctx.arc_to = v.arc_to;
        ctx.arc_remaining = v.arc_remaining;
    } else {
        ctx.node = v.at;
    }
    ctx.depart = std::max(now, v.busy ? v.busy_until : now);
    ctx.deliveries = v.loaded;
    ctx.load = static_cast<int>(v.loaded.size());
    if (v.busy) {
        if (v.busy_action == StopAction::Pickup) {
            // The in-flight pickup completes; its delivery becomes mandatory.
            ctx.deliveries.insert(
                std::lower_bound(ctx.deliveries.begin(), ctx.deliveries.end(), v.busy_order),
                v.busy_order);
            ctx.load += 1;
        } else if (v.busy_action == StopAction::Deliver) {
            ctx.deliveries.erase(
                std::find(ctx.deliveries.begin(), ctx.deliveries.end(), v.busy_order));
            ctx.load -= 1;
        }
    }
    return ctx;
}

RouteEval evaluate_route(RoutePlan& plan, const PlanningContext& ctx, const SimState& state,
                         const Network& net, const ScenarioConfig& cfg) {
    RouteEval ev;
    TimeMs t = ctx.depart;
    int load = ctx.load;
    NodeId pos = ctx.node;
    bool first_leg_en_route = ctx.en_route;

    std::vector<OrderId> deliverable = ctx.deliveries;  // sorted
    auto can_deliver = [&deliverable](OrderId id) {
        return std::binary_search(deliverable.begin(), deliverable.end(), id);
    };

    for (Stop& s : plan.stops) {
        TimeMs leg;
        if (first_leg_en_route) {
            leg = ctx.arc_remaining + net.travel_time(ctx.arc_to, s.location);
            first_leg_en_route = false;
        } else {
            leg = net.travel_time(pos, s.location);
        }
        ev.travel += leg;
        t += leg;
        pos = s.location;
        s.arrival = t;
        switch (s.action) {
            case StopAction::Pickup: {
                if (!cfg.pre_empty_allowed && load > 0) return {};
                load += static_cast<int>(s.orders.size());
                if (load > cfg.capacity) return {};
                t += cfg.load_time * static_cast<TimeMs>(s.orders.size());
                for (OrderId id : s.orders) {
                    deliverable.insert(
                        std::lower_bound(deliverable.begin(), deliverable.end(), id), id);
                }
                break;
            }
            case StopAction::Deliver: {
                if (s.orders.size() != 1)
                    throw std::logic_error("route: delivery stop must carry one order");
                OrderId id = s.orders.front();
                if (!can_deliver(id))
                    throw std::logic_error("route: delivery of order " + std::to_string(id) +
                                           " that is neither loaded nor picked up earlier");
                deliverable.erase(
                    std::lower_bound(deliverable.begin(), deliverable.end(), id));
                load -= 1;
                t += cfg.service_time;
                const Order& o = state.order(id);
                if (t > latest_dropoff(o, net, cfg)) return {};
                ev.theta_sum += t - ideal_time_original(o, net, cfg);
                break;
            }
            case StopAction::Relocate:
                break;
        }
        s.departure = t;
    }
    if (!deliverable.empty())
        throw std::logic_error("route: plan leaves mandatory deliveries unserved");
    ev.feasible = true;
    ev.completion = t;
    ev.cost = route_cost(ev.theta_sum, ev.travel, cfg.cost_weight);
    return ev;
}

}  // namespace mdsd
