#include "mdsd/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mdsd {

void Network::add_node(NodeId id, double x, double y) {
    if (index_.count(id)) throw std::runtime_error("network: duplicate node id " + std::to_string(id));
    index_[id] = static_cast<int>(ids_.size());
    ids_.push_back(id);
    xs_.push_back(x);
    ys_.push_back(y);
    adj_.emplace_back();
}

void Network::add_arc(NodeId from, NodeId to, TimeMs w) {
    auto fi = index_.find(from);
    auto ti = index_.find(to);
    if (fi == index_.end())
        throw std::runtime_error("network: dangling endpoint, unknown node " + std::to_string(from));
    if (ti == index_.end())
        throw std::runtime_error("network: dangling endpoint, unknown node " + std::to_string(to));
    if (w <= 0)
        throw std::runtime_error("network: non-positive weight on arc " + std::to_string(from) +
                                 " -> " + std::to_string(to));
    adj_[fi->second].push_back({ti->second, w});
}

void Network::set_depots(std::vector<NodeId> depots) {
    for (NodeId d : depots)
        if (!index_.count(d))
            throw std::runtime_error("network: depot " + std::to_string(d) + " is not a node");
    depots_ = std::move(depots);
}

bool Network::is_depot(NodeId id) const {
    return std::find(depots_.begin(), depots_.end(), id) != depots_.end();
}

int Network::index(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::runtime_error("network: unknown node " + std::to_string(id));
    return it->second;
}

void Network::finalize() const {
    if (ids_.empty()) throw std::runtime_error("network: empty node set");
    // Strong connectivity: every node reachable from node 0 and node 0
    // reachable from every node (forward + reverse BFS).
    const int n = node_count();
    std::vector<std::vector<int>> radj(n);
    for (int u = 0; u < n; ++u)
        for (const Arc& a : adj_[u]) radj[a.to].push_back(u);
    auto bfs = [n](const auto& next, int start, std::vector<char>& seen) {
        std::queue<int> q;
        q.push(start);
        seen[start] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : next(u))
                if (!seen[v]) {
                    seen[v] = 1;
                    q.push(v);
                }
        }
    };
    std::vector<char> fwd(n, 0), bwd(n, 0);
    bfs([this](int u) {
        std::vector<int> out;
        for (const Arc& a : adj_[u]) out.push_back(a.to);
        return out;
    }, 0, fwd);
    bfs([&radj](int u) { return radj[u]; }, 0, bwd);
    for (int u = 0; u < n; ++u) {
        if (!fwd[u])
            throw std::runtime_error("network: disconnected, node " + std::to_string(ids_[u]) +
                                     " unreachable from " + std::to_string(ids_[0]));
        if (!bwd[u])
            throw std::runtime_error("network: disconnected, node " + std::to_string(ids_[0]) +
                                     " unreachable from " + std::to_string(ids_[u]));
    }
}

const Network::SourceTable& Network::table_for(int src) const {
    {
        std::shared_lock lk(cache_->mu);
        auto it = cache_->tables.find(src);
        if (it != cache_->tables.end()) return *it->second;
    }
    std::unique_lock lk(cache_->mu);
    auto it = cache_->tables.find(src);
    if (it != cache_->tables.end()) return *it->second;

    auto tbl = std::make_unique<SourceTable>();
    const int n = node_count();
    tbl->dist.assign(n, kInfTime);
    tbl->parent.assign(n, -1);
    using Item = std::pair<TimeMs, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    tbl->dist[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d != tbl->dist[u]) continue;
        for (const Arc& a : adj_[u]) {
            TimeMs nd = d + a.w;
            if (nd < tbl->dist[a.to]) {
                tbl->dist[a.to] = nd;
                tbl->parent[a.to] = u;
                pq.push({nd, a.to});
            }
        }
    }
    auto [pos, inserted] = cache_->tables.emplace(src, std::move(tbl));
    (void)inserted;
    return *pos->second;
}

TimeMs Network::travel_time(NodeId a, NodeId b) const {
    int ai = index(a), bi = index(b);
    if (ai == bi) return 0;
    const SourceTable& t = table_for(ai);
    if (t.dist[bi] >= kInfTime)
        throw std::runtime_error("network: node " + std::to_string(b) + " unreachable from " +
                                 std::to_string(a));
    return t.dist[bi];
}

std::vector<NodeId> Network::shortest_path(NodeId a, NodeId b) const {
    int ai = index(a), bi = index(b);
    std::vector<NodeId> path;
    if (ai == bi) {
        path.push_back(a);
        return path;
    }
    const SourceTable& t = table_for(ai);
    if (t.dist[bi] >= kInfTime)
        throw std::runtime_error("network: node " + std::to_string(b) + " unreachable from " +
                                 std::to_string(a));
    for (int cur = bi; cur != -1; cur = t.parent[cur]) path.push_back(ids_[cur]);
    std::reverse(path.begin(), path.end());
    return path;
}

TimeMs Network::arc_weight(NodeId from, NodeId to) const {
    int fi = index(from), ti = index(to);
    for (const Arc& a : adj_[fi])
        if (a.to == ti) return a.w;
    throw std::runtime_error("network: no arc " + std::to_string(from) + " -> " + std::to_string(to));
}

namespace {

struct RawArc {
    NodeId from, to;
    bool has_w;
    double w_s;
};

}  // namespace

Network load_network(const std::string& path, double speed_mps) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("network: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("network: empty file " + path);
    std::istringstream hdr(line);
    std::string knodes, karcs;
    long n = 0, m = 0;
    if (!(hdr >> knodes >> n >> karcs >> m) || knodes != "nodes" || karcs != "arcs")
        throw std::runtime_error("network: bad header in " + path + " (want 'nodes <n> arcs <m>')");

    Network net;
    std::vector<RawArc> arcs;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "N") {
            NodeId id;
            double x, y;
            if (!(ls >> id >> x >> y))
                throw std::runtime_error("network: " + path + ":" + std::to_string(lineno) +
                                         ": bad node line");
            net.add_node(id, x, y);
        } else if (tag == "A") {
            RawArc a{};
            if (!(ls >> a.from >> a.to))
                throw std::runtime_error("network: " + path + ":" + std::to_string(lineno) +
                                         ": bad arc line");
            a.has_w = static_cast<bool>(ls >> a.w_s);
            arcs.push_back(a);
        } else if (tag[0] == '#') {
            continue;
        } else {
            throw std::runtime_error("network: " + path + ":" + std::to_string(lineno) +
                                     ": unknown record '" + tag + "'");
        }
    }
    if (net.node_count() != n)
        throw std::runtime_error("network: header declares " + std::to_string(n) + " nodes, file has " +
                                 std::to_string(net.node_count()));
    if (static_cast<long>(arcs.size()) != m)
        throw std::runtime_error("network: header declares " + std::to_string(m) + " arcs, file has " +
                                 std::to_string(arcs.size()));
    for (const RawArc& a : arcs) {
        TimeMs w;
        if (a.has_w) {
            w = seconds_to_ms(a.w_s);
        } else {
            if (!net.has_node(a.from) || !net.has_node(a.to))
                throw std::runtime_error("network: dangling endpoint, unknown node " +
                                         std::to_string(net.has_node(a.from) ? a.to : a.from));
            double dx = net.x_of(a.from) - net.x_of(a.to);
            double dy = net.y_of(a.from) - net.y_of(a.to);
            w = seconds_to_ms(std::sqrt(dx * dx + dy * dy) / speed_mps);
        }
        net.add_arc(a.from, a.to, w);
    }
    net.finalize();
    return net;
}

std::vector<NodeId> load_depots(const std::string& path, const Network& net) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("depots: cannot open " + path);
    std::vector<NodeId> depots;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        NodeId id;
        if (!(ls >> id)) {
            if (line.empty() || line[0] == '#') continue;
            throw std::runtime_error("depots: " + path + ":" + std::to_string(lineno) + ": bad line");
        }
        if (!net.has_node(id))
            throw std::runtime_error("depots: " + path + ":" + std::to_string(lineno) + ": node " +
                                     std::to_string(id) + " not in network");
        if (std::find(depots.begin(), depots.end(), id) != depots.end())
            throw std::runtime_error("depots: duplicate depot " + std::to_string(id));
        depots.push_back(id);
    }
    if (depots.empty()) throw std::runtime_error("depots: no depots in " + path);
    return depots;
}

void save_depots(const std::vector<NodeId>& depots, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("depots: cannot write " + path);
    for (NodeId d : depots) out << d << "\n";
}

TimeMs k_center_objective(const Network& net, const std::vector<NodeId>& depots) {
    TimeMs worst = 0;
    for (NodeId nid : net.node_ids()) {
        TimeMs best = kInfTime;
        for (NodeId d : depots) best = std::min(best, net.travel_time(d, nid));
        worst = std::max(worst, best);
    }
    return worst;
}

std::vector<NodeId> k_center_depots(const Network& net, int k, int restarts, std::uint64_t seed) {
    const auto& nodes = net.node_ids();
    const int n = static_cast<int>(nodes.size());
    if (k < 1 || k > n)
        throw std::runtime_error("k_center: k=" + std::to_string(k) + " out of range [1," +
                                 std::to_string(n) + "]");
    if (restarts < 1) throw std::runtime_error("k_center: restarts must be >= 1");

    std::mt19937_64 rng(seed);
    std::vector<NodeId> best_set;
    TimeMs best_obj = kInfTime;
    for (int r = 0; r < restarts; ++r) {
        NodeId start = nodes[static_cast<size_t>(rng() % n)];
        std::vector<NodeId> set{start};
        // min over chosen depots of travel_time(depot, node), updated per pick
        std::vector<TimeMs> near(n);
        for (int i = 0; i < n; ++i) near[i] = net.travel_time(start, nodes[i]);
        while (static_cast<int>(set.size()) < k) {
            int far = 0;
            for (int i = 1; i < n; ++i)
                if (near[i] > near[far]) far = i;  // ties keep lowest index = lowest position
            // node ids are stored in insertion order; resolve equal distances
            // by the lowest node id for determinism
            NodeId pick = nodes[far];
            for (int i = 0; i < n; ++i)
                if (near[i] == near[far] && nodes[i] < pick) pick = nodes[i];
            set.push_back(pick);
            for (int i = 0; i < n; ++i)
                near[i] = std::min(near[i], net.travel_time(pick, nodes[i]));
        }
        TimeMs obj = 0;
        for (int i = 0; i < n; ++i) obj = std::max(obj, near[i]);
        if (obj < best_obj) {
            best_obj = obj;
            best_set = std::move(set);
        }
    }
    return best_set;
}

}  // namespace mdsd
