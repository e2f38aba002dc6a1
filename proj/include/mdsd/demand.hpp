#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdsd/model.hpp"
#include "mdsd/network.hpp"

namespace mdsd {

struct DemandProfile {
    int total_orders = 0;
    TimeMs horizon = 0;     // releases fall in [0, horizon - quiet_tail]
    TimeMs quiet_tail = 0;
    double base_rate = 0.0;         // orders/second, uniform component
    std::vector<DemandPeak> peaks;  // truncated Gaussians on top of the base
};

// Seeded synthetic demand: release times from the normalized mixture,
// destinations uniform over non-depot nodes, sorted by release time,
// ids 0..N-1 in release order. Deterministic per seed.
std::vector<Order> generate_demand(const DemandProfile& profile, const Network& net,
                                   std::uint64_t seed);

// Demand file: lines "O <id> <release_seconds> <destination>".
std::vector<Order> load_demand(const std::string& path, const Network& net, TimeMs day_end,
                               TimeMs quiet_tail);
void save_demand(const std::vector<Order>& orders, const std::string& path);

}  // namespace mdsd
