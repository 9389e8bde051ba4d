#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "qxmap/architecture.hpp"
#include "qxmap/swap_table.hpp"
#include "test_support.hpp"

using namespace qxmap;

TEST_CASE("built-in ibm-qx4 matches the device edge list") {
    const auto cm = builtin_qx4();
    REQUIRE(cm.num_physical == 5);
    REQUIRE(cm.edges.size() == 6);
    // Device naming is 1-based: p3 -> p1 exists, p1 -> p2 does not.
    REQUIRE(cm.has_edge(2, 0));
    REQUIRE_FALSE(cm.has_edge(0, 1));
    REQUIRE(cm.has_edge(1, 0));
}

TEST_CASE("loads a coupling map from JSON") {
    const auto cm = load_coupling_map(R"({"name":"line3","qubits":3,"edges":[[0,1],[1,2]]})");
    REQUIRE(cm.num_physical == 3);
    REQUIRE(cm.has_edge(0, 1));
    REQUIRE_FALSE(cm.has_edge(1, 0));

    REQUIRE_THROWS_AS(load_coupling_map(R"({"name":"bad","qubits":2,"edges":[[0,0]]})"),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(load_coupling_map(R"({"name":"bad","qubits":2,"edges":[[0,2]]})"),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(load_coupling_map("{not json"), std::invalid_argument);
    REQUIRE_THROWS_AS(load_coupling_map(R"({"qubits":2,"edges":[]})"), std::invalid_argument);
}

TEST_CASE("the qx4 JSON fixture equals the built-in map") {
    const auto cm =
        load_coupling_map(testsupport::read_file(testsupport::fixture_path("ibm-qx4.json")));
    REQUIRE(cm == builtin_qx4());
}

TEST_CASE("connected subsets of qx4") {
    const auto cm = builtin_qx4();
    const auto four = connected_subsets(cm, 4);
    REQUIRE(four.size() == 4);
    for (const auto& subset : four)
        REQUIRE(std::find(subset.begin(), subset.end(), 2) != subset.end());  // p3 everywhere
    REQUIRE(connected_subsets(cm, 5) == std::vector<std::vector<int>>{{0, 1, 2, 3, 4}});
}

TEST_CASE("connected subsets of a 3-qubit line") {
    const auto subsets = connected_subsets(testsupport::line3_map(), 2);
    REQUIRE(subsets == std::vector<std::vector<int>>{{0, 1}, {1, 2}});
}

TEST_CASE("swap table basics on qx4") {
    const auto cm = builtin_qx4();
    const SwapDistanceTable table(cm, 4, {0, 1, 2, 3, 4});
    REQUIRE(table.placements().size() == 120);

    for (std::size_t i = 0; i < table.placements().size(); i += 17)
        REQUIRE(table.distance(i, i) == 0);

    // Exchanging the occupants of one coupling edge is a single SWAP.
    Placement a{{0, 1, 2, 3}};
    Placement b = a;
    b.exchange(3, 4);
    REQUIRE(table.distance(a, b) == 1);

    // A 3-cycle of occupants around the p1-p2-p3 triangle needs two SWAPs.
    const SwapDistanceTable tri(cm, 3, {0, 1, 2});
    Placement x{{0, 1, 2}};
    Placement y{{1, 2, 0}};
    REQUIRE(tri.distance(x, y) == 2);
}

TEST_CASE("swap distances agree with an independent deepening search") {
    const auto cm = builtin_qx4();
    const std::vector<int> allowed{0, 1, 2, 3, 4};
    const SwapDistanceTable table(cm, 3, allowed);
    std::mt19937 rng(77);
    std::uniform_int_distribution<std::size_t> pick(0, table.placements().size() - 1);
    for (int i = 0; i < 25; ++i) {
        const auto& a = table.placements()[pick(rng)];
        const auto& b = table.placements()[pick(rng)];
        REQUIRE(table.distance(a, b) ==
                testsupport::iddfs_swap_distance(cm, allowed, a, b));
    }
}

TEST_CASE("swap distance is a metric") {
    const auto cm = builtin_qx4();
    const SwapDistanceTable table(cm, 4, {0, 1, 2, 3, 4});
    std::mt19937 rng(1234);
    std::uniform_int_distribution<std::size_t> pick(0, table.placements().size() - 1);
    for (int i = 0; i < 300; ++i) {
        const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
        REQUIRE(table.distance(a, a) == 0);
        REQUIRE(table.distance(a, b) == table.distance(b, a));
        REQUIRE(table.distance(a, c) <= table.distance(a, b) + table.distance(b, c));
        if (a != b) REQUIRE(table.distance(a, b) > 0);
    }
}

TEST_CASE("witness sequences replay to the target placement") {
    const auto cm = builtin_qx4();
    const SwapDistanceTable table(cm, 4, {0, 1, 2, 3, 4});
    std::mt19937 rng(4321);
    std::uniform_int_distribution<std::size_t> pick(0, table.placements().size() - 1);
    for (int i = 0; i < 40; ++i) {
        const auto& a = table.placements()[pick(rng)];
        const auto& b = table.placements()[pick(rng)];
        const auto path = table.witness(a, b);
        REQUIRE(path.size() == static_cast<std::size_t>(table.distance(a, b)));
        Placement cur = a;
        for (const auto& [u, v] : path) {
            REQUIRE(cm.has_undirected(u, v));
            cur.exchange(u, v);
        }
        REQUIRE(cur == b);
    }
}

TEST_CASE("full-device distances are invariant under graph automorphisms") {
    const auto cm = builtin_qx4();
    // Undirected qx4 is two triangles glued at p3; swapping p1/p2, swapping
    // p4/p5, and exchanging the triangle pairs are all automorphisms.
    const std::vector<std::vector<int>> autos = {
        {1, 0, 2, 3, 4}, {0, 1, 2, 4, 3}, {3, 4, 2, 0, 1}};
    for (const auto& sigma : autos)
        for (const auto& [a, b] : cm.undirected_edges())
            REQUIRE(cm.has_undirected(sigma[a], sigma[b]));

    std::vector<int> all(5);
    std::iota(all.begin(), all.end(), 0);
    std::mt19937 rng(5);
    for (int i = 0; i < 20; ++i) {
        std::vector<int> pi = all;
        std::shuffle(pi.begin(), pi.end(), rng);
        for (const auto& sigma : autos) {
            std::vector<int> conj(5);
            for (int v = 0; v < 5; ++v) conj[sigma[v]] = sigma[pi[v]];
            REQUIRE(swaps_of_permutation(cm, pi) == swaps_of_permutation(cm, conj));
        }
    }
}

TEST_CASE("swaps of a permutation") {
    const auto cm = builtin_qx4();
    REQUIRE(swaps_of_permutation(cm, {0, 1, 2, 3, 4}) == 0);
    // Transposition along the p3-p1 edge.
    REQUIRE(swaps_of_permutation(cm, {2, 1, 0, 3, 4}) == 1);
    const SwapDistanceTable full(cm, 5, {0, 1, 2, 3, 4});
    REQUIRE(full.placements().size() == 120);
    REQUIRE_THROWS_AS(swaps_of_permutation(cm, {0, 1, 2, 3, 3}), std::invalid_argument);
}

TEST_CASE("table construction rejects bad subsets") {
    const auto cm = builtin_qx4();
    REQUIRE_THROWS_AS(SwapDistanceTable(cm, 3, {0, 1}), std::invalid_argument);
    REQUIRE_THROWS_AS(SwapDistanceTable(cm, 2, {0, 3}), std::invalid_argument);  // disconnected
    REQUIRE_THROWS_AS(SwapDistanceTable(cm, 2, {0, 9}), std::invalid_argument);
    REQUIRE_THROWS_AS(SwapDistanceTable(cm, 4, {0, 1, 2, 3, 4}, 10), CapExceededError);
}
