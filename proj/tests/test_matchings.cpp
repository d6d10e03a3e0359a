#include <random>

#include "doctest.h"
#include "immersion/matchings.hpp"

using namespace immersion;

namespace {

// Brute-force maximum matching size via bitmask DP over vertices.
int brute_matching_size(const MultiGraph& g) {
    std::vector<VertexId> vs = g.vertices();
    int n = static_cast<int>(vs.size());
    std::map<VertexId, int> idx;
    for (int i = 0; i < n; ++i) idx[vs[i]] = i;
    std::vector<int> best(1u << n, 0);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        int i = 0;
        while (!(mask & (1u << i))) ++i;
        best[mask] = best[mask & ~(1u << i)];
        for (int j = i + 1; j < n; ++j) {
            if ((mask & (1u << j)) && g.adjacent(vs[i], vs[j])) {
                best[mask] = std::max(best[mask], 1 + best[mask & ~(1u << i) & ~(1u << j)]);
            }
        }
    }
    return best[(1u << n) - 1];
}

bool brute_hypomatchable(const MultiGraph& g) {
    if (g.num_vertices() % 2 == 0 || g.num_vertices() == 0) return false;
    for (VertexId v : g.vertices()) {
        std::set<VertexId> rest;
        for (VertexId w : g.vertices()) {
            if (w != v) rest.insert(w);
        }
        MultiGraph sub = g.induced_subgraph(rest);
        if (2 * static_cast<std::size_t>(brute_matching_size(sub)) != rest.size()) return false;
    }
    return true;
}

MultiGraph random_graph(std::mt19937_64& rng, int n, int percent) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (static_cast<int>(rng() % 100) < percent) g.add_edge(i, j);
        }
    }
    return g;
}

void check_matching_valid(const MultiGraph& g, const Matching& m) {
    std::set<VertexId> used;
    for (const auto& [a, b] : m.edges) {
        CHECK(g.adjacent(a, b));
        CHECK(used.insert(a).second);
        CHECK(used.insert(b).second);
    }
}

MultiGraph petersen() {
    MultiGraph g;
    for (int i = 0; i < 10; ++i) g.add_vertex();
    for (int i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);          // outer cycle
        g.add_edge(5 + i, 5 + (i + 2) % 5);  // inner pentagram
        g.add_edge(i, 5 + i);                // spokes
    }
    return g;
}

}  // namespace

TEST_CASE("maximum_matching small fixtures") {
    CHECK(maximum_matching(complete_graph(2)).size() == 1);
    CHECK(maximum_matching(cycle_graph(5)).size() == 2);
    CHECK(maximum_matching(petersen()).size() == 5);
    check_matching_valid(petersen(), maximum_matching(petersen()));
}

TEST_CASE("maximum_matching agrees with brute force on random graphs") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 600; ++trial) {
        int n = 1 + static_cast<int>(rng() % 8);
        MultiGraph g = random_graph(rng, n, 20 + static_cast<int>(rng() % 70));
        Matching m = maximum_matching(g);
        check_matching_valid(g, m);
        CHECK(static_cast<int>(m.size()) == brute_matching_size(g));
    }
}

TEST_CASE("missable set matches per-vertex deletion probes") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 + static_cast<int>(rng() % 7);
        MultiGraph g = random_graph(rng, n, 20 + static_cast<int>(rng() % 70));
        MatchingAnalysis a = analyze_matching(g);
        int nu = static_cast<int>(a.matching.size());
        for (VertexId v : g.vertices()) {
            std::set<VertexId> rest;
            for (VertexId w : g.vertices()) {
                if (w != v) rest.insert(w);
            }
            int nu_without = brute_matching_size(g.induced_subgraph(rest));
            bool missable = (nu_without == nu);
            CHECK(missable == (a.missable.count(v) != 0));
        }
    }
}

TEST_CASE("is_hypomatchable fixtures and brute-force agreement") {
    CHECK(is_hypomatchable(complete_graph(3)));
    CHECK(is_hypomatchable(complete_graph(1)));
    CHECK(is_hypomatchable(cycle_graph(5)));
    CHECK_FALSE(is_hypomatchable(path_graph(4)));
    // witness for the failing end vertex of P4: deleting an inner vertex splits it
    CHECK_THROWS_AS(hypomatchable_witness(path_graph(4), 1), Error);
    Matching w = hypomatchable_witness(cycle_graph(5), 2);
    CHECK(w.size() == 2);

    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 7);
        MultiGraph g = random_graph(rng, n, 30 + static_cast<int>(rng() % 60));
        CHECK(is_hypomatchable(g) == brute_hypomatchable(g));
    }
}

TEST_CASE("edmonds_gallai fixtures") {
    SUBCASE("K3: empty T, one hypomatchable component") {
        EdmondsGallaiCover c = edmonds_gallai(complete_graph(3));
        CHECK(c.T.empty());
        CHECK(c.components.size() == 1);
        CHECK(c.M.size() == 0);
    }
    SUBCASE("K2: T is one endpoint") {
        EdmondsGallaiCover c = edmonds_gallai(complete_graph(2));
        CHECK(c.T.size() == 1);
        CHECK(c.components.size() == 1);
        CHECK(c.M.size() == 1);
    }
    SUBCASE("star K13: T = center") {
        MultiGraph star = complete_bipartite(1, 3);
        EdmondsGallaiCover c = edmonds_gallai(star);
        CHECK(c.T == std::set<VertexId>{0});
        CHECK(c.components.size() == 3);
        CHECK(c.M.size() == 1);
    }
}

TEST_CASE("edmonds_gallai invariants hold on random graphs") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 400; ++trial) {
        int n = 1 + static_cast<int>(rng() % 9);
        MultiGraph g = random_graph(rng, n, 10 + static_cast<int>(rng() % 80));
        EdmondsGallaiCover c = edmonds_gallai(g);
        validate_cover(g, c);  // throws on violation
    }
}

TEST_CASE("match_structure trichotomy") {
    MultiGraph two_k2;
    for (int i = 0; i < 4; ++i) two_k2.add_vertex();
    two_k2.add_edge(0, 1);
    two_k2.add_edge(2, 3);
    CHECK(match_structure(two_k2).kind == MatchStructure::Kind::PerfectMatching);
    CHECK(match_structure(cycle_graph(5)).kind == MatchStructure::Kind::Hypomatchable);

    MultiGraph star_plus = complete_bipartite(1, 3);
    star_plus.add_vertex();  // isolated vertex 4
    MatchStructure ms = match_structure(star_plus);
    REQUIRE(ms.kind == MatchStructure::Kind::Cover);
    CHECK(ms.cover.T.size() == 1);
    CHECK(ms.cover.components.size() == 4);

    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 1 + static_cast<int>(rng() % 8);
        MultiGraph g = random_graph(rng, n, 10 + static_cast<int>(rng() % 85));
        MatchStructure s = match_structure(g);
        bool pm = 2 * static_cast<std::size_t>(brute_matching_size(g)) == g.num_vertices();
        bool hypo = brute_hypomatchable(g);
        switch (s.kind) {
            case MatchStructure::Kind::PerfectMatching:
                CHECK(pm);
                check_matching_valid(g, s.perfect);
                CHECK(2 * s.perfect.size() == g.num_vertices());
                break;
            case MatchStructure::Kind::Hypomatchable:
                CHECK_FALSE(pm);
                CHECK(hypo);
                break;
            case MatchStructure::Kind::Cover:
                CHECK_FALSE(pm);
                CHECK_FALSE(hypo);
                validate_cover(g, s.cover);
                break;
        }
    }
}

TEST_CASE("small_cover_or_witness on the spec fixtures") {
    // h = complement of (K13 + isolated vertex): center 0, leaves 1..3, isolated 4
    MultiGraph base = complete_bipartite(1, 3);
    base.add_vertex();
    MultiGraph h = base.complement();

    SUBCASE("tau = 4 gives the small cover") {
        auto r = small_cover_or_witness(h, 4);
        REQUIRE(std::holds_alternative<SmallCover>(r));
        const auto& sc = std::get<SmallCover>(r);
        CHECK(sc.T.size() == 1);
        CHECK(sc.W.size() == 3);
    }
    SUBCASE("tau = 3 gives the multipartite witness") {
        auto r = small_cover_or_witness(h, 3);
        REQUIRE(std::holds_alternative<MultipartiteWitness>(r));
        const auto& mw = std::get<MultipartiteWitness>(r);
        CHECK(mw.parts.size() == 4);
        for (const auto& p : mw.parts) CHECK(p.size() == 1);
    }
    SUBCASE("K5 with tau = 5: W has four vertices, T empty") {
        auto r = small_cover_or_witness(complete_graph(5), 5);
        REQUIRE(std::holds_alternative<SmallCover>(r));
        const auto& sc = std::get<SmallCover>(r);
        CHECK(sc.T.empty());
        CHECK(sc.W.size() == 4);
    }
    SUBCASE("precondition is checked") {
        CHECK_THROWS_AS(small_cover_or_witness(complete_graph(4).complement(), 3), Error);
    }
}

TEST_CASE("small cover conclusions hold verbatim on random instances") {
    std::mt19937_64 rng(67);
    int covered = 0;
    for (int trial = 0; trial < 3000 && covered < 250; ++trial) {
        int n = 3 + static_cast<int>(rng() % 8);
        MultiGraph h = random_graph(rng, n, 30 + static_cast<int>(rng() % 65));
        MatchStructure ms = match_structure(h.complement());
        if (ms.kind != MatchStructure::Kind::Cover) continue;
        int tau = 2 + static_cast<int>(rng() % 6);
        auto r = small_cover_or_witness(h, tau);
        ++covered;
        if (std::holds_alternative<SmallCover>(r)) {
            const auto& sc = std::get<SmallCover>(r);
            CHECK(!sc.W.empty());
            CHECK(sc.T.size() <= sc.W.size());
            CHECK(sc.W.size() <= static_cast<std::size_t>(tau - 1));
            for (VertexId w : sc.W) {
                CHECK(h.degree(w) + tau >= h.num_vertices());
                for (VertexId v : h.vertices()) {
                    if (!sc.W.count(v) && !sc.T.count(v) && v != w) CHECK(h.adjacent(w, v));
                }
            }
        } else {
            const auto& mw = std::get<MultipartiteWitness>(r);
            std::size_t total = 0;
            for (const auto& p : mw.parts) total += p.size();
            for (const auto& p : mw.parts) {
                CHECK(total - p.size() >= static_cast<std::size_t>(tau));
                for (VertexId u : p) {
                    for (const auto& q : mw.parts) {
                        if (&p == &q) continue;
                        for (VertexId v : q) CHECK(h.adjacent(u, v));
                    }
                }
            }
        }
    }
    CHECK(covered >= 250);
}

TEST_CASE("hall_injection") {
    SUBCASE("empty demand") {
        CHECK(hall_injection({}, [](VertexId) { return std::vector<VertexId>{}; }).empty());
    }
    SUBCASE("K_nn side gives an SDR") {
        auto inj = hall_injection({0, 1, 2}, [](VertexId) {
            return std::vector<VertexId>{10, 11, 12};
        });
        std::set<VertexId> targets;
        for (auto [s, y] : inj) {
            (void)s;
            targets.insert(y);
        }
        CHECK(targets.size() == 3);
    }
    SUBCASE("unique SDR instance is forced") {
        std::map<VertexId, std::vector<VertexId>> nbr{
            {0, {10}}, {1, {10, 11}}, {2, {11, 12}}};
        auto inj = hall_injection({0, 1, 2}, [&](VertexId s) { return nbr.at(s); });
        CHECK(inj.at(0) == 10);
        CHECK(inj.at(1) == 11);
        CHECK(inj.at(2) == 12);
    }
    SUBCASE("violation is detected and named") {
        std::map<VertexId, std::vector<VertexId>> nbr{{0, {10}}, {1, {10}}, {2, {10, 11}}};
        CHECK_THROWS_AS(hall_injection({0, 1, 2}, [&](VertexId s) { return nbr.at(s); }), Error);
    }
}
