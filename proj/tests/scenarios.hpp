#pragma once

// Shared scenario builders for unit and acceptance tests.

#include <cstdint>
#include <vector>

#include "mdsd/config.hpp"
#include "mdsd/demand.hpp"
#include "mdsd/model.hpp"
#include "mdsd/network.hpp"

namespace mdsd::test {

// Bidirectional grid, spacing in meters, arc weights spacing/speed seconds.
Network make_grid(int rows, int cols, double spacing_m, double speed_mps);

// Straight path graph 0-1-...-(n-1), both directions, given arc seconds.
Network make_path(int n, double arc_seconds);

// Desk-scale acceptance scenario: 20x20 grid (150 m spacing), 5 k-center
// depots, 500 orders over a 4 h horizon with a noon and a stronger evening
// peak, 8 vehicles, C=6, eta=6, x=3, dt=100 s, 480 s delay bounds, beta=1/3.
struct DeskScenario {
    ScenarioConfig cfg;
    Network net;
};

DeskScenario make_desk_scenario();
std::vector<Order> desk_demand(const DeskScenario& sc, std::uint64_t seed);

// A minimal consistent SimState: all orders placed at the given clock,
// vehicles empty at their given nodes.
SimState make_state(const Network& net, const ScenarioConfig& cfg, TimeMs clock,
                    const std::vector<NodeId>& vehicle_nodes, const std::vector<Order>& orders);

Order make_order(OrderId id, TimeMs release, NodeId dest);

}  // namespace mdsd::test
