#include <random>

#include "doctest.h"
#include "immersion/gen.hpp"
#include "immersion/oracle.hpp"

using namespace immersion;

TEST_CASE("twin classes") {
    MultiGraph g = complete_multipartite_graph({3, 3, 3, 3});
    auto classes = twin_classes(g);
    REQUIRE(classes.size() == 4);
    for (const auto& c : classes) CHECK(c.size() == 3);

    MultiGraph k5 = complete_graph(5);
    auto kc = twin_classes(k5);
    REQUIRE(kc.size() == 1);
    CHECK(kc[0].size() == 5);
}

TEST_CASE("oracle decides the easy fixtures") {
    SUBCASE("K_t immerses itself") {
        OracleResult r = decide_immersion(complete_graph(4), 4, true);
        REQUIRE(r.kind == OracleResult::Kind::Yes);
        CHECK(verify_strong_immersion(complete_graph(4), r.certificate).accepted);
    }
    SUBCASE("C5 immerses K3 via the three arcs") {
        OracleResult r = decide_immersion(cycle_graph(5), 3, true);
        REQUIRE(r.kind == OracleResult::Kind::Yes);
    }
    SUBCASE("K4 does not immerse K5") {
        OracleResult r = decide_immersion(complete_graph(4), 5, false);
        CHECK(r.kind == OracleResult::Kind::No);
    }
    SUBCASE("t=1 is a vertex") {
        OracleResult r = decide_immersion(complete_graph(2), 1, true);
        CHECK(r.kind == OracleResult::Kind::Yes);
    }
    SUBCASE("star cannot immerse K3") {
        OracleResult r = decide_immersion(complete_bipartite(1, 4), 3, false);
        CHECK(r.kind == OracleResult::Kind::No);
    }
}

TEST_CASE("K_{t,t} strongly immerses K_t") {
    for (int t : {3, 4}) {
        OracleResult r = decide_immersion(gen_ktt(t), t, true);
        REQUIRE(r.kind == OracleResult::Kind::Yes);
    }
}

TEST_CASE("budget exhaustion reports Exhausted, never a bogus No") {
    OracleBudget tiny;
    tiny.max_nodes = 50;
    OracleResult r = decide_immersion(gen_ktt(4), 4, true, tiny);
    CHECK(r.kind != OracleResult::Kind::No);
}

TEST_CASE("monotonicity on random small graphs") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 4 + static_cast<int>(rng() % 4);
        MultiGraph g;
        for (int i = 0; i < n; ++i) g.add_vertex();
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng() % 100 < 55) g.add_edge(i, j);
            }
        }
        for (int t = 4; t >= 2; --t) {
            OracleResult rt = decide_immersion(g, t, true, OracleBudget{2'000'000, 0.0});
            if (rt.kind == OracleResult::Kind::Yes) {
                OracleResult prev = decide_immersion(g, t - 1, true, OracleBudget{2'000'000, 0.0});
                CHECK(prev.kind == OracleResult::Kind::Yes);
            }
        }
    }
}

TEST_CASE("seymour's graph refuses K10 but immerses K9") {
    MultiGraph g = gen_seymour12();
    REQUIRE(g.num_edges() == 54);  // 66 minus the 12 triangle edges
    for (VertexId v : g.vertices()) REQUIRE(g.degree(v) == 9);
    SUBCASE("K9 yes") {
        OracleResult r = decide_immersion(g, 9, false, OracleBudget{50'000'000, 0.0});
        CHECK(r.kind == OracleResult::Kind::Yes);
    }
    SUBCASE("K10 no (symmetry-pruned search)") {
        OracleResult r = decide_immersion(g, 10, false, OracleBudget{200'000'000, 0.0});
        CHECK(r.kind == OracleResult::Kind::No);
    }
}

TEST_CASE("sampled minimum degree property at t=5") {
    OracleBudget per;
    per.max_nodes = 2'000'000;
    SampledReport rep = sampled_mindegree_property(5, 8, 20, 99, per);
    CHECK(rep.samples == 20);
    CHECK(rep.no == 0);
    CHECK(rep.findings.empty());
    CHECK(rep.yes + rep.exhausted == 20);
}

TEST_CASE("parallel jobs find the same yes/no answers") {
    MultiGraph g = cycle_graph(6);
    OracleResult seq = decide_immersion(g, 3, true, {}, 1);
    OracleResult par = decide_immersion(g, 3, true, {}, 2);
    CHECK(seq.kind == par.kind);
}
