#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "mdsd/network.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace mdsd;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path.string();
}

}  // namespace

TEST_CASE("two-node file with explicit weight") {
    auto p = write_temp("net_two.txt",
                        "nodes 2 arcs 2\nN 1 0 0\nN 2 10 0\nA 1 2 60\nA 2 1 60\n");
    Network net = load_network(p, 10.0);
    CHECK(net.travel_time(1, 2) == 60'000);
}

TEST_CASE("dangling arc endpoint is a named diagnostic") {
    auto p = write_temp("net_dangle.txt", "nodes 2 arcs 2\nN 1 0 0\nN 2 10 0\nA 1 3 60\nA 2 1 5\n");
    CHECK_THROWS_WITH_AS(load_network(p, 10.0),
                         doctest::Contains("dangling endpoint"), std::runtime_error);
}

TEST_CASE("non-positive weight rejected") {
    auto p = write_temp("net_zero.txt", "nodes 2 arcs 2\nN 1 0 0\nN 2 10 0\nA 1 2 0\nA 2 1 5\n");
    CHECK_THROWS_WITH_AS(load_network(p, 10.0),
                         doctest::Contains("non-positive weight"), std::runtime_error);
}

TEST_CASE("disconnected graph rejected") {
    auto p = write_temp("net_disc.txt",
                        "nodes 3 arcs 2\nN 1 0 0\nN 2 10 0\nN 3 20 0\nA 1 2 5\nA 2 1 5\n");
    CHECK_THROWS_WITH_AS(load_network(p, 10.0), doctest::Contains("disconnected"),
                         std::runtime_error);
}

TEST_CASE("weightless arcs derive travel time from coordinates and speed") {
    auto p = write_temp("net_coord.txt",
                        "nodes 2 arcs 2\nN 0 0 0\nN 1 100 0\nA 0 1\nA 1 0\n");
    Network net = load_network(p, 10.0);
    CHECK(net.travel_time(0, 1) == 10'000);
}

TEST_CASE("travel time identity and shortest-path choice") {
    Network net;
    net.add_node(0, 0, 0);
    net.add_node(1, 0, 0);
    net.add_node(2, 0, 0);
    net.add_arc(0, 2, seconds_to_ms(10));
    net.add_arc(0, 1, seconds_to_ms(3));
    net.add_arc(1, 2, seconds_to_ms(4));
    net.add_arc(2, 0, seconds_to_ms(1));
    net.finalize();
    CHECK(net.travel_time(0, 0) == 0);
    CHECK(net.travel_time(0, 2) == seconds_to_ms(7));
    auto path = net.shortest_path(0, 2);
    CHECK(path == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("unreachable target names both nodes") {
    Network net;  // deliberately skips finalize()
    net.add_node(0, 0, 0);
    net.add_node(1, 0, 0);
    net.add_arc(1, 0, 1000);
    CHECK_THROWS_WITH_AS(net.travel_time(0, 1), doctest::Contains("unreachable"),
                         std::runtime_error);
}

TEST_CASE("random graph matches Bellman-Ford on 100 queried pairs") {
    std::mt19937_64 rng(7);
    const int n = 50;
    Network net;
    for (int i = 0; i < n; ++i) net.add_node(i, 0, 0);
    std::vector<oracle::Edge> edges;
    // ring for connectivity, then random chords
    for (int i = 0; i < n; ++i) {
        TimeMs w = 1000 + static_cast<TimeMs>(rng() % 9000);
        net.add_arc(i, (i + 1) % n, w);
        edges.push_back({i, (i + 1) % n, w});
    }
    for (int k = 0; k < 150; ++k) {
        int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
        if (a == b) continue;
        TimeMs w = 500 + static_cast<TimeMs>(rng() % 20'000);
        net.add_arc(a, b, w);
        edges.push_back({a, b, w});
    }
    net.finalize();
    for (int q = 0; q < 100; ++q) {
        int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
        auto dist = oracle::bellman_ford(n, edges, a);
        CHECK(net.travel_time(a, b) == dist[b]);
    }
}

TEST_CASE("memoized queries equal cold queries and are thread safe") {
    Network cold = test::make_grid(8, 8, 100, 10);
    Network warm = test::make_grid(8, 8, 100, 10);
    // warm the cache from many threads
    std::vector<std::thread> ts;
    for (int w = 0; w < 4; ++w)
        ts.emplace_back([&warm, w] {
            for (int a = w; a < 64; a += 4)
                for (int b = 0; b < 64; ++b) (void)warm.travel_time(a, b);
        });
    for (auto& t : ts) t.join();
    for (int a = 0; a < 64; a += 7)
        for (int b = 0; b < 64; ++b) CHECK(warm.travel_time(a, b) == cold.travel_time(a, b));
}

TEST_CASE("triangle inequality over sampled triples") {
    Network net = test::make_grid(6, 6, 120, 10);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 300; ++k) {
        NodeId a = rng() % 36, b = rng() % 36, c = rng() % 36;
        CHECK(net.travel_time(a, c) <= net.travel_time(a, b) + net.travel_time(b, c));
    }
}

TEST_CASE("k-center on a star graph picks the center") {
    Network net;
    net.add_node(0, 0, 0);
    for (int i = 1; i <= 5; ++i) {
        net.add_node(i, 0, 0);
        net.add_arc(0, i, 1000);
        net.add_arc(i, 0, 1000);
    }
    net.finalize();
    auto depots = k_center_depots(net, 1, 10, 42);
    CHECK(depots == std::vector<NodeId>{0});
}

TEST_CASE("k equal to node count saturates") {
    Network net = test::make_path(4, 10);
    auto depots = k_center_depots(net, 4, 3, 1);
    CHECK(depots.size() == 4);
    CHECK(k_center_objective(net, depots) == 0);
}

TEST_CASE("k=2 on a path graph matches exhaustive search") {
    Network net = test::make_path(6, 10);
    auto depots = k_center_depots(net, 2, 20, 5);
    CHECK(k_center_objective(net, depots) == oracle::k_center_two_exhaustive(net));
}

TEST_CASE("k-center objective non-increasing in k") {
    Network net = test::make_grid(7, 7, 100, 10);
    TimeMs prev = kInfTime;
    for (int k : {1, 2, 3, 5, 8}) {
        auto depots = k_center_depots(net, k, 20, 99);
        TimeMs obj = k_center_objective(net, depots);
        CHECK(obj <= prev);
        prev = obj;
    }
}

TEST_CASE("k out of range") {
    Network net = test::make_path(3, 10);
    CHECK_THROWS_AS(k_center_depots(net, 4, 1, 0), std::runtime_error);
}

TEST_CASE("depot file round trip and validation") {
    Network net = test::make_path(5, 10);
    auto p = std::filesystem::temp_directory_path() / "depots_rt.txt";
    save_depots({1, 3}, p.string());
    auto depots = load_depots(p.string(), net);
    CHECK(depots == std::vector<NodeId>{1, 3});
    std::ofstream(p) << "7\n";
    CHECK_THROWS_AS(load_depots(p.string(), net), std::runtime_error);
}
