#include "scenarios.hpp"

namespace mdsd::test {

Network make_grid(int rows, int cols, double spacing_m, double speed_mps) {
    Network net;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            net.add_node(r * cols + c, c * spacing_m, r * spacing_m);
    TimeMs w = seconds_to_ms(spacing_m / speed_mps);
    auto arc = [&](NodeId a, NodeId b) {
        net.add_arc(a, b, w);
        net.add_arc(b, a, w);
    };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) arc(r * cols + c, r * cols + c + 1);
            if (r + 1 < rows) arc(r * cols + c, (r + 1) * cols + c);
        }
    net.finalize();
    return net;
}

Network make_path(int n, double arc_seconds) {
    Network net;
    for (int i = 0; i < n; ++i) net.add_node(i, i * 100.0, 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        net.add_arc(i, i + 1, seconds_to_ms(arc_seconds));
        net.add_arc(i + 1, i, seconds_to_ms(arc_seconds));
    }
    net.finalize();
    return net;
}

DeskScenario make_desk_scenario() {
    DeskScenario sc;
    sc.cfg.max_delay_real = 480'000;
    sc.cfg.max_delay_heuristic = 480'000;
    sc.cfg.fleet_size = 8;
    sc.cfg.capacity = 6;
    sc.cfg.depot_count = 5;
    sc.cfg.cost_weight = 1.0 / 3.0;
    sc.cfg.max_trip_size = 6;
    sc.cfg.service_time = 30'000;
    sc.cfg.load_time = 15'000;
    sc.cfg.epoch_length = 100'000;
    sc.cfg.quiet_tail = 600'000;
    sc.cfg.depots_per_order = 3;
    sc.cfg.speed = 10.0;
    sc.cfg.tripgen_timeout = 5'000;
    sc.cfg.ilp_budget = 10'000;
    sc.cfg.reject_penalty = 10'000.0;
    sc.cfg.day_end = 14'400'000;  // 4 h
    sc.cfg.pre_empty_allowed = true;
    sc.cfg.seed = 0;
    sc.net = make_grid(20, 20, 150.0, sc.cfg.speed);
    sc.net.set_depots(k_center_depots(sc.net, sc.cfg.depot_count, 20, 1234));
    return sc;
}

std::vector<Order> desk_demand(const DeskScenario& sc, std::uint64_t seed) {
    DemandProfile p;
    p.total_orders = 500;
    p.horizon = sc.cfg.day_end;
    p.quiet_tail = sc.cfg.quiet_tail;
    p.base_rate = 0.012;  // ~165 orders of uniform background
    p.peaks = {{5'000.0, 900.0, 130.0}, {10'400.0, 800.0, 205.0}};
    return generate_demand(p, sc.net, seed);
}

SimState make_state(const Network& net, const ScenarioConfig& cfg, TimeMs clock,
                    const std::vector<NodeId>& vehicle_nodes, const std::vector<Order>& orders) {
    SimState state;
    state.clock = clock;
    for (const Order& o : orders) state.orders.add(o);
    for (const Order& o : orders) state.make_placed(o.id);
    state.next_release = orders.size();
    for (std::size_t i = 0; i < vehicle_nodes.size(); ++i) {
        Vehicle v;
        v.id = static_cast<VehicleId>(i);
        v.at = vehicle_nodes[i];
        state.fleet.push_back(std::move(v));
    }
    (void)net;
    (void)cfg;
    return state;
}

Order make_order(OrderId id, TimeMs release, NodeId dest) {
    Order o;
    o.id = id;
    o.release = release;
    o.effective_release = release;
    o.destination = dest;
    return o;
}

}  // namespace mdsd::test
