#include "mdsd/demand.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mdsd {

namespace {

// Hand-rolled draws keep the byte stream identical across standard library
// implementations (std distributions are implementation-defined).
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
}

double normal_draw(std::mt19937_64& rng) {
    // Box-Muller; one draw per call for a simple deterministic stream.
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace

std::vector<Order> generate_demand(const DemandProfile& profile, const Network& net,
                                   std::uint64_t seed) {
    if (profile.total_orders < 0) throw std::runtime_error("demand: negative order count");
    const TimeMs window = profile.horizon - profile.quiet_tail;
    if (profile.total_orders > 0 && window <= 0)
        throw std::runtime_error("demand: empty release window (horizon <= quiet_tail)");

    std::vector<NodeId> destinations;
    for (NodeId id : net.node_ids())
        if (!net.is_depot(id)) destinations.push_back(id);
    if (destinations.empty() && profile.total_orders > 0)
        throw std::runtime_error("demand: no non-depot nodes to deliver to");
    std::sort(destinations.begin(), destinations.end());

    for (const DemandPeak& p : profile.peaks) {
        if (p.width_s <= 0.0) throw std::runtime_error("demand: peak width must be > 0");
        if (p.weight < 0.0) throw std::runtime_error("demand: peak weight must be >= 0");
        TimeMs c = seconds_to_ms(p.center_s);
        if (c < 0 || c > window)
            throw std::runtime_error("demand: peak center outside the release window");
    }

    double base_weight = profile.base_rate * ms_to_seconds(window);
    double total_weight = base_weight;
    for (const DemandPeak& p : profile.peaks) total_weight += p.weight;
    if (profile.total_orders > 0 && total_weight <= 0.0)
        throw std::runtime_error("demand: mixture has zero total weight");

    std::mt19937_64 rng(seed);
    std::vector<Order> orders;
    orders.reserve(profile.total_orders);
    for (int i = 0; i < profile.total_orders; ++i) {
        double pick = uniform01(rng) * total_weight;
        TimeMs release;
        if (pick < base_weight || profile.peaks.empty()) {
            release = static_cast<TimeMs>(uniform01(rng) * static_cast<double>(window));
        } else {
            pick -= base_weight;
            std::size_t pi = 0;
            while (pi + 1 < profile.peaks.size() && pick >= profile.peaks[pi].weight) {
                pick -= profile.peaks[pi].weight;
                ++pi;
            }
            const DemandPeak& p = profile.peaks[pi];
            // truncated to the window by resampling
            while (true) {
                double t_s = p.center_s + p.width_s * normal_draw(rng);
                TimeMs t = seconds_to_ms(t_s);
                if (t >= 0 && t <= window) {
                    release = t;
                    break;
                }
            }
        }
        Order o;
        o.release = release;
        o.effective_release = release;
        o.destination = destinations[static_cast<std::size_t>(
            uniform01(rng) * static_cast<double>(destinations.size()))];
        orders.push_back(o);
    }
    std::stable_sort(orders.begin(), orders.end(),
                     [](const Order& a, const Order& b) { return a.release < b.release; });
    for (std::size_t i = 0; i < orders.size(); ++i) orders[i].id = static_cast<OrderId>(i);
    return orders;
}

std::vector<Order> load_demand(const std::string& path, const Network& net, TimeMs day_end,
                               TimeMs quiet_tail) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("demand: cannot open " + path);
    std::vector<Order> orders;
    std::vector<OrderId> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        OrderId id;
        double release_s;
        NodeId dest;
        if (!(ls >> tag >> id >> release_s >> dest) || tag != "O")
            throw std::runtime_error("demand: " + path + ":" + std::to_string(lineno) +
                                     ": bad order line");
        if (!net.has_node(dest))
            throw std::runtime_error("demand: " + path + ":" + std::to_string(lineno) +
                                     ": unknown destination node " + std::to_string(dest));
        Order o;
        o.id = id;
        o.release = seconds_to_ms(release_s);
        o.effective_release = o.release;
        o.destination = dest;
        if (o.release < 0)
            throw std::runtime_error("demand: " + path + ":" + std::to_string(lineno) +
                                     ": negative release time");
        if (o.release > day_end - quiet_tail)
            throw std::runtime_error("demand: " + path + ":" + std::to_string(lineno) + ": order " +
                                     std::to_string(id) + " released after the quiet tail begins");
        seen.push_back(id);
        orders.push_back(o);
    }
    std::sort(seen.begin(), seen.end());
    auto dup = std::adjacent_find(seen.begin(), seen.end());
    if (dup != seen.end())
        throw std::runtime_error("demand: duplicate order id " + std::to_string(*dup));
    std::stable_sort(orders.begin(), orders.end(),
                     [](const Order& a, const Order& b) { return a.release < b.release; });
    return orders;
}

void save_demand(const std::vector<Order>& orders, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("demand: cannot write " + path);
    char buf[128];
    for (const Order& o : orders) {
        std::snprintf(buf, sizeof buf, "O %d %.3f %d\n", o.id, ms_to_seconds(o.release),
                      o.destination);
        out << buf;
    }
}

}  // namespace mdsd
