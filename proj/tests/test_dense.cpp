#include <random>

#include "doctest.h"
#include "immersion/dense.hpp"
#include "immersion/multigraph.hpp"

using namespace immersion;

TEST_CASE("list_edge_coloring basics") {
    SUBCASE("single edge takes its only color") {
        MultiGraph h;
        h.add_vertex(0);
        h.add_vertex(1);
        h.add_edge(0, 1);
        ColorLists lists{{{0, 1}, {7}}};
        auto phi = list_edge_coloring(h, lists);
        CHECK(phi.at({0, 1}) == 7);
    }
    SUBCASE("K3 with identical 3-lists gets a bijection") {
        MultiGraph h = complete_graph(3);
        ColorLists lists;
        for (const auto& [_, ep] : h.edges()) lists[ep.as_pair()] = {10, 11, 12};
        auto phi = list_edge_coloring(h, lists);
        std::set<VertexId> used;
        for (auto& [e, c] : phi) {
            (void)e;
            used.insert(c);
        }
        CHECK(used.size() == 3);
    }
    SUBCASE("K3 with two colors is infeasible") {
        MultiGraph h = complete_graph(3);
        ColorLists lists;
        for (const auto& [_, ep] : h.edges()) lists[ep.as_pair()] = {10, 11};
        CHECK_THROWS_AS(list_edge_coloring(h, lists), Error);
    }
}

TEST_CASE("immerse_via_common_neighbors") {
    SUBCASE("a clique needs no splits") {
        MultiGraph g = complete_graph(5);
        std::set<VertexId> A{0, 1, 2}, B{3, 4};
        DerivationLog log;
        auto cert = immerse_via_common_neighbors(g, log, A, B, 3);
        CHECK(log.size() == 0);
        CHECK(verify_strong_immersion(g, cert).accepted);
    }
    SUBCASE("K33 gives K3 through the other side") {
        MultiGraph g = complete_bipartite(3, 3);
        MultiGraph root = g;
        std::set<VertexId> A{0, 1, 2}, B{3, 4, 5};
        DerivationLog log;
        auto derived = immerse_via_common_neighbors(g, log, A, B, 3);
        CHECK(log.size() == 3);
        CHECK(verify_strong_immersion(g, derived).accepted);
        ImmersionCertificate lifted = lift_certificate(root, log, derived);
        CHECK(verify_strong_immersion(root, lifted).accepted);
        for (const auto& [_, path] : lifted.paths) CHECK(path.size() == 3);
    }
    SUBCASE("independent triple with three shared neighbors") {
        // A = {0,1,2} pairwise non-adjacent, B = {3,4,5} adjacent to all of A
        MultiGraph g;
        for (int i = 0; i < 6; ++i) g.add_vertex();
        for (int a = 0; a < 3; ++a) {
            for (int b = 3; b < 6; ++b) g.add_edge(a, b);
        }
        MultiGraph root = g;
        DerivationLog log;
        auto derived = immerse_via_common_neighbors(g, log, {0, 1, 2}, {3, 4, 5}, 3);
        ImmersionCertificate lifted = lift_certificate(root, log, derived);
        CHECK(verify_strong_immersion(root, lifted).accepted);
    }
    SUBCASE("deficient pair is reported") {
        MultiGraph g;
        for (int i = 0; i < 5; ++i) g.add_vertex();
        g.add_edge(0, 3);
        g.add_edge(1, 3);  // single common neighbor for {0,1}
        DerivationLog log;
        CHECK_THROWS_AS(immerse_via_common_neighbors(g, log, {0, 1}, {3, 4}, 2), Error);
    }
}

TEST_CASE("immerse_complete_multipartite") {
    SUBCASE("K_{t+1} as singletons") {
        MultiGraph g = complete_graph(5);
        std::vector<std::set<VertexId>> parts{{0}, {1}, {2}, {3}, {4}};
        DerivationLog log;
        auto cert = immerse_complete_multipartite(g, log, parts, 4);
        CHECK(verify_strong_immersion(g, cert).accepted);
    }
    SUBCASE("octahedron immerses K4") {
        MultiGraph g = complete_multipartite_graph({2, 2, 2});
        MultiGraph root = g;
        std::vector<std::set<VertexId>> parts{{0, 1}, {2, 3}, {4, 5}};
        DerivationLog log;
        auto derived = immerse_complete_multipartite(g, log, parts, 4);
        CHECK(verify_strong_immersion(g, derived).accepted);
        ImmersionCertificate lifted = lift_certificate(root, log, derived);
        CHECK(verify_strong_immersion(root, lifted).accepted);
        CHECK(lifted.t == 4);
    }
    SUBCASE("K_{3,3,3,3} immerses K9 and refuses K10") {
        MultiGraph g = complete_multipartite_graph({3, 3, 3, 3});
        std::vector<std::set<VertexId>> parts{
            {0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {9, 10, 11}};
        {
            MultiGraph work = g;
            DerivationLog log;
            auto derived = immerse_complete_multipartite(work, log, parts, 9);
            CHECK(verify_strong_immersion(work, derived).accepted);
            ImmersionCertificate lifted = lift_certificate(g, log, derived);
            CHECK(verify_strong_immersion(g, lifted).accepted);
            CHECK(lifted.t == 9);
        }
        {
            MultiGraph work = g;
            DerivationLog log;
            CHECK_THROWS_AS(immerse_complete_multipartite(work, log, parts, 10), Error);
        }
    }
}

TEST_CASE("coloring never reports infeasible when lists have size n") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 2000; ++trial) {
        int n = 2 + static_cast<int>(rng() % 6);
        MultiGraph h;
        for (int i = 0; i < n; ++i) h.add_vertex();
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng() % 100 < 60) h.add_edge(i, j);
            }
        }
        ColorLists lists;
        for (const auto& [_, ep] : h.edges()) {
            std::vector<VertexId> pool;
            for (int c = 0; c < n + 3; ++c) pool.push_back(100 + c);
            for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng() % i]);
            pool.resize(n);
            lists[ep.as_pair()] = pool;
        }
        auto phi = list_edge_coloring(h, lists);
        for (const auto& [e1, c1] : phi) {
            for (const auto& [e2, c2] : phi) {
                if (e1 < e2 && c1 == c2) {
                    bool share = e1.first == e2.first || e1.first == e2.second ||
                                 e1.second == e2.first || e1.second == e2.second;
                    CHECK_FALSE(share);
                }
            }
        }
    }
}
