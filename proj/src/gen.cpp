#include "immersion/gen.hpp"

#include <algorithm>
#include <random>

namespace immersion {

MultiGraph gen_complete(int n) {
    if (n < 1) throw Error(ErrorKind::BadParams, "n must be positive");
    return complete_graph(n);
}

MultiGraph gen_complete_multipartite(const std::vector<int>& parts) {
    if (parts.empty()) throw Error(ErrorKind::BadParams, "no parts");
    for (int p : parts) {
        if (p < 1) throw Error(ErrorKind::BadParams, "part sizes must be positive");
    }
    return complete_multipartite_graph(parts);
}

MultiGraph gen_ktt(int t) {
    if (t < 1) throw Error(ErrorKind::BadParams, "t must be positive");
    return complete_bipartite(t, t);
}

MultiGraph gen_seymour12() {
    MultiGraph g = complete_graph(12);
    for (int base = 0; base < 12; base += 3) {
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                std::vector<EdgeId> es = g.edges_between(base + i, base + j);
                g.remove_edge(es.front());
            }
        }
    }
    return g;
}

MultiGraph gen_random_regular(int n, int d, std::uint64_t seed) {
    if (n < 1 || d < 0 || d >= n || (static_cast<long long>(n) * d) % 2 != 0) {
        throw Error(ErrorKind::BadParams, "need 0 <= d < n with n*d even");
    }
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex();
    // circulant base: offsets 1..d/2 (plus the antipode for odd d)
    for (int off = 1; off <= d / 2; ++off) {
        for (int i = 0; i < n; ++i) {
            int j = (i + off) % n;
            if (g.adjacent(i, j)) throw Error(ErrorKind::BadParams, "offsets collide; d too big");
            g.add_edge(i, j);
        }
    }
    if (d % 2 == 1) {
        for (int i = 0; i < n / 2; ++i) g.add_edge(i, i + n / 2);
    }

    std::mt19937_64 rng(seed);
    std::vector<EdgeId> edge_list;
    for (const auto& [id, _] : g.edges()) edge_list.push_back(id);
    long long proposals = 20LL * static_cast<long long>(edge_list.size());
    for (long long step = 0; step < proposals; ++step) {
        std::size_t i = rng() % edge_list.size();
        std::size_t j = rng() % edge_list.size();
        if (i == j) continue;
        Endpoints e1 = g.endpoints(edge_list[i]);
        Endpoints e2 = g.endpoints(edge_list[j]);
        VertexId a = e1.u, b = e1.v, c = e2.u, x = e2.v;
        if (rng() % 2 == 0) std::swap(c, x);
        // rewire ab, cx -> ax, cb
        if (a == c || a == x || b == c || b == x) continue;
        if (g.adjacent(a, x) || g.adjacent(c, b)) continue;
        g.remove_edge(edge_list[i]);
        g.remove_edge(edge_list[j]);
        edge_list[i] = g.add_edge(a, x);
        edge_list[j] = g.add_edge(c, b);
    }
    for (VertexId v : g.vertices()) {
        if (g.degree(v) != static_cast<std::size_t>(d)) {
            throw Error(ErrorKind::InvariantBreach, "regularity lost during swaps");
        }
    }
    return g;
}

MultiGraph gen_two_blocks_thin_cut(int n, int d, int cut, std::uint64_t seed) {
    if (n < 4 || n % 2 != 0) throw Error(ErrorKind::BadParams, "n must be even and >= 4");
    int half = n / 2;
    if (cut < 1 || cut > half) throw Error(ErrorKind::BadParams, "bad cut size");
    MultiGraph b1 = gen_random_regular(half, d, seed * 2 + 1);
    MultiGraph b2 = gen_random_regular(half, d, seed * 2 + 2);
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex();
    for (const auto& [_, ep] : b1.edges()) g.add_edge(ep.u, ep.v);
    for (const auto& [_, ep] : b2.edges()) g.add_edge(ep.u + half, ep.v + half);
    std::mt19937_64 rng(seed);
    std::set<VertexPair> used;
    int placed = 0;
    while (placed < cut) {
        VertexId u = static_cast<VertexId>(rng() % half);
        VertexId v = static_cast<VertexId>(half + rng() % half);
        if (used.insert({u, v}).second) {
            g.add_edge(u, v);
            ++placed;
        }
    }
    return g;
}

}  // namespace immersion
