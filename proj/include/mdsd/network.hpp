#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mdsd/types.hpp"

namespace mdsd {

// Road network: directed weighted graph (weights = travel times) plus the
// ordered depot set. Immutable after load; the shortest-path cache is
// internally synchronized so trip generation workers can query concurrently.
class Network {
public:
    struct Arc {
        int to;        // internal index
        TimeMs w;      // travel time
    };

    Network() = default;

    // Building blocks used by loaders and tests.
    void add_node(NodeId id, double x, double y);
    void add_arc(NodeId from, NodeId to, TimeMs w);
    void set_depots(std::vector<NodeId> depots);

    // Validates invariants: positive finite weights, known endpoints
    // (checked in add_arc), strong connectivity, depots are nodes.
    void finalize() const;

    int node_count() const { return static_cast<int>(ids_.size()); }
    const std::vector<NodeId>& node_ids() const { return ids_; }
    const std::vector<NodeId>& depots() const { return depots_; }
    bool has_node(NodeId id) const { return index_.count(id) != 0; }
    bool is_depot(NodeId id) const;

    double x_of(NodeId id) const { return xs_[index(id)]; }
    double y_of(NodeId id) const { return ys_[index(id)]; }

    // Shortest directed travel time a -> b. Memoized per source. Throws on
    // unknown nodes; throws "unreachable" if b cannot be reached (only
    // possible on networks that skipped finalize()).
    TimeMs travel_time(NodeId a, NodeId b) const;

    // Node sequence of a shortest path a -> b, both endpoints included.
    std::vector<NodeId> shortest_path(NodeId a, NodeId b) const;

    // Arc weight lookup on the path edge from -> to (must exist).
    TimeMs arc_weight(NodeId from, NodeId to) const;

    int index(NodeId id) const;

private:
    struct SourceTable {
        std::vector<TimeMs> dist;
        std::vector<int> parent;
    };
    // Heap-held so Network stays movable; the mutex guards the cache map,
    // individual tables are immutable once published.
    struct Cache {
        std::shared_mutex mu;
        std::unordered_map<int, std::unique_ptr<SourceTable>> tables;
    };

    const SourceTable& table_for(int src) const;

    std::vector<NodeId> ids_;
    std::vector<double> xs_, ys_;
    std::unordered_map<NodeId, int> index_;
    std::vector<std::vector<Arc>> adj_;
    std::vector<NodeId> depots_;

    mutable std::unique_ptr<Cache> cache_ = std::make_unique<Cache>();
};

// Line-oriented graph file: header "nodes <n> arcs <m>", then
// "N <id> <x> <y>" and "A <from> <to> [<seconds>]" lines. Missing arc
// weights are derived as euclidean distance / speed_mps.
Network load_network(const std::string& path, double speed_mps);

// Depot file: one node id per line.
std::vector<NodeId> load_depots(const std::string& path, const Network& net);
void save_depots(const std::vector<NodeId>& depots, const std::string& path);

// Greedy farthest-point k-center with seeded restarts; returns the depot set
// minimizing the maximum travel time from its nearest depot to any node.
// Ties in the farthest-point choice go to the lowest node id.
std::vector<NodeId> k_center_depots(const Network& net, int k, int restarts, std::uint64_t seed);

// Max over nodes of min over depots of travel_time(depot, node).
TimeMs k_center_objective(const Network& net, const std::vector<NodeId>& depots);

}  // namespace mdsd
