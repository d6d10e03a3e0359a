#include "immersion/eulprep.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/stoer_wagner_min_cut.hpp>
#include <boost/property_map/property_map.hpp>

#include "immersion/dense.hpp"
#include "immersion/matchings.hpp"

namespace immersion {

MinCut global_min_cut(const MultiGraph& g) {
    if (g.num_vertices() < 2) {
        throw Error(ErrorKind::BadParams, "min cut needs at least two vertices");
    }
    auto comps = g.connected_components();
    if (comps.size() > 1) {
        return MinCut{0, comps.front()};
    }

    using BoostGraph =
        boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
                              boost::property<boost::edge_weight_t, long long>>;
    std::vector<VertexId> ids = g.vertices();
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;

    std::map<VertexPair, long long> weight;
    for (const auto& [_, ep] : g.edges()) {
        if (!ep.is_loop()) ++weight[ep.as_pair()];
    }
    BoostGraph bg(ids.size());
    for (const auto& [pair, w] : weight) {
        boost::add_edge(index.at(pair.first), index.at(pair.second), w, bg);
    }
    auto parities =
        boost::make_one_bit_color_map(boost::num_vertices(bg), boost::get(boost::vertex_index, bg));
    long long value = boost::stoer_wagner_min_cut(bg, boost::get(boost::edge_weight, bg),
                                                  boost::parity_map(parities));
    MinCut cut;
    cut.value = value;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (boost::get(parities, i)) cut.side.insert(ids[i]);
    }
    if (cut.side.empty() || cut.side.size() == ids.size()) {
        throw Error(ErrorKind::InvariantBreach, "degenerate side from min cut");
    }
    return cut;
}

std::set<VertexId> well_connected_core(const MultiGraph& g, int d) {
    if (d < 2 || d % 2 != 0) throw Error(ErrorKind::PreconditionViolated, "d must be even");
    if (g.min_degree() < static_cast<std::size_t>(d)) {
        throw Error(ErrorKind::PreconditionViolated, "minimum degree below d");
    }
    std::set<VertexId> X;
    for (VertexId v : g.vertices()) X.insert(v);

    while (X.size() >= 2) {
        MultiGraph sub = g.induced_subgraph(X);
        std::set<VertexId> side;
        auto comps = sub.connected_components();
        if (comps.size() > 1) {
            side = comps.front();
        } else {
            MinCut cut = global_min_cut(sub);
            if (cut.value >= d / 2) return X;
            side = cut.side;
        }
        std::set<VertexId> other;
        for (VertexId v : X) {
            if (!side.count(v)) other.insert(v);
        }
        // one shore has boundary < d; a singleton never qualifies since every
        // vertex keeps degree >= d in g
        bool side_ok = g.boundary_size(side) < static_cast<std::size_t>(d);
        bool other_ok = g.boundary_size(other) < static_cast<std::size_t>(d);
        if (side_ok && other_ok) {
            X = (*side.begin() < *other.begin()) ? side : other;
        } else if (side_ok) {
            X = side;
        } else if (other_ok) {
            X = other;
        } else {
            throw Error(ErrorKind::InvariantBreach, "both shores have large boundary");
        }
    }
    return X;
}

PrepOutcome near_regularize(const MultiGraph& g, int d, int t) {
    if (!g.is_simple()) throw Error(ErrorKind::NotSimple, "near_regularize input must be simple");
    if (g.min_degree() < static_cast<std::size_t>(d)) {
        throw Error(ErrorKind::PreconditionViolated, "minimum degree below d");
    }
    PrepOutcome out;
    out.graph = g;
    MultiGraph& w = out.graph;
    DerivationLog& log = out.log;

    // drop edges whose endpoints both still exceed degree d
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<EdgeId> snapshot;
        snapshot.reserve(w.num_edges());
        for (const auto& [id, _] : w.edges()) snapshot.push_back(id);
        for (EdgeId id : snapshot) {
            if (!w.has_edge(id)) continue;
            Endpoints ep = w.endpoints(id);
            if (w.degree(ep.u) > static_cast<std::size_t>(d) &&
                w.degree(ep.v) > static_cast<std::size_t>(d)) {
                w.remove_edge_logged(log, id);
                changed = true;
            }
        }
    }

    std::vector<VertexId> S;
    for (VertexId v : w.vertices()) {
        if (w.degree(v) >= static_cast<std::size_t>(d + t + 1)) S.push_back(v);
    }
    for (VertexId u : S) {
        for (VertexId v : S) {
            if (u < v && w.adjacent(u, v)) {
                throw Error(ErrorKind::InvariantBreach, "high-degree set is not independent");
            }
        }
    }

    std::map<VertexId, VertexId> anchor;
    if (!S.empty()) {
        try {
            anchor = hall_injection(S, [&](VertexId v) { return w.neighbors(v); });
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::HallViolated) {
                throw Error(ErrorKind::InvariantBreach,
                            "Hall condition failed for the high-degree set");
            }
            throw;
        }
    }

    for (VertexId v : S) {
        std::set<VertexId> nbrs;
        for (VertexId x : w.neighbors(v)) nbrs.insert(x);
        MultiGraph H = w.induced_subgraph(nbrs);
        MultiGraph Hbar = H.complement();
        MatchStructure ms = match_structure(Hbar);

        Matching M;
        bool drop_anchor_edge = false;
        if (ms.kind == MatchStructure::Kind::PerfectMatching) {
            M = ms.perfect;
        } else if (ms.kind == MatchStructure::Kind::Hypomatchable) {
            M = hypomatchable_witness(Hbar, anchor.at(v));
            drop_anchor_edge = true;
        } else {
            // every H vertex has degree <= d < |V(H)| - t, so the small-cover
            // side of the dichotomy is impossible; the witness yields K_t
            auto r = small_cover_or_witness(H, t);
            if (!std::holds_alternative<MultipartiteWitness>(r)) {
                throw Error(ErrorKind::InvariantBreach,
                            "small cover appeared in a bounded-degree neighborhood");
            }
            const auto& parts = std::get<MultipartiteWitness>(r).parts;
            out.certificate = immerse_complete_multipartite(w, log, parts, t);
            out.immersion_found = true;
            return out;
        }

        std::vector<VertexPair> pairs = M.edges;
        std::sort(pairs.begin(), pairs.end());
        for (const auto& [x, y] : pairs) {
            std::vector<EdgeId> ex = w.edges_between(v, x);
            std::vector<EdgeId> ey = w.edges_between(v, y);
            if (ex.empty() || ey.empty()) {
                throw Error(ErrorKind::InvariantBreach, "matching pair not incident to the hub");
            }
            w.split_off(log, ex.front(), ey.front(), v);
        }
        if (drop_anchor_edge) {
            std::vector<EdgeId> rest = w.edges_between(v, anchor.at(v));
            if (rest.size() != 1) {
                throw Error(ErrorKind::InvariantBreach, "anchor edge multiplicity surprise");
            }
            w.remove_edge_logged(log, rest.front());
        }
        if (w.degree(v) != 0) {
            throw Error(ErrorKind::InvariantBreach, "hub not isolated after elimination");
        }
        w.remove_vertex(v);
        log.record_vertex_deleted(v);
    }

    if (w.min_degree() + 1 < static_cast<std::size_t>(d) ||
        w.max_degree() > static_cast<std::size_t>(d + t)) {
        throw Error(ErrorKind::InvariantBreach, "degree window [d-1, d+t] violated");
    }
    return out;
}

namespace {

struct TreeScaffold {
    std::map<VertexId, EdgeId> parent_edge;
    std::map<VertexId, VertexId> parent;
    std::map<VertexId, int> depth;
};

TreeScaffold root_tree(const MultiGraph& g, const std::set<EdgeId>& tree, VertexId root) {
    std::map<VertexId, std::vector<std::pair<VertexId, EdgeId>>> adj;
    for (EdgeId e : tree) {
        Endpoints ep = g.endpoints(e);
        adj[ep.u].push_back({ep.v, e});
        adj[ep.v].push_back({ep.u, e});
    }
    TreeScaffold s;
    s.depth[root] = 0;
    std::deque<VertexId> q{root};
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        for (auto [w, e] : adj[v]) {
            if (s.depth.count(w)) continue;
            s.depth[w] = s.depth[v] + 1;
            s.parent[w] = v;
            s.parent_edge[w] = e;
            q.push_back(w);
        }
    }
    return s;
}

// tree edges incident to w on the tree path x..y, or empty if w is not on it
std::vector<EdgeId> path_edges_at(const TreeScaffold& s, VertexId x, VertexId y, VertexId w) {
    std::vector<EdgeId> out;
    VertexId a = x, b = y;
    auto step = [&](VertexId& v) {
        EdgeId e = s.parent_edge.at(v);
        VertexId p = s.parent.at(v);
        if (v == w || p == w) out.push_back(e);
        v = p;
    };
    while (s.depth.at(a) > s.depth.at(b)) step(a);
    while (s.depth.at(b) > s.depth.at(a)) step(b);
    while (a != b) {
        step(a);
        step(b);
    }
    return out;
}

int tree_max_degree(const MultiGraph& g, const std::set<EdgeId>& tree,
                    std::map<VertexId, int>& deg) {
    deg.clear();
    for (VertexId v : g.vertices()) deg[v] = 0;
    for (EdgeId e : tree) {
        Endpoints ep = g.endpoints(e);
        ++deg[ep.u];
        ++deg[ep.v];
    }
    int mx = 0;
    for (auto& [_, d] : deg) mx = std::max(mx, d);
    return mx;
}

// swap non-tree edges into the tree while some vertex exceeds the cap
bool improve_tree(const MultiGraph& g, std::set<EdgeId>& tree, int k) {
    while (true) {
        std::map<VertexId, int> deg;
        int mx = tree_max_degree(g, tree, deg);
        if (mx <= k) return true;
        TreeScaffold s = root_tree(g, tree, g.lowest_vertex());
        bool swapped = false;
        for (const auto& [id, ep] : g.edges()) {
            if (tree.count(id) || ep.is_loop()) continue;
            VertexId x = ep.u, y = ep.v;
            if (x == y || deg[x] + 1 > k || deg[y] + 1 > k) continue;
            // an over-degree vertex on the fundamental cycle sheds one edge
            std::vector<EdgeId> candidates;
            for (const auto& [v, dv] : deg) {
                if (dv <= k || v == x || v == y) continue;
                candidates = path_edges_at(s, x, y, v);
                if (!candidates.empty()) break;
            }
            if (candidates.empty()) continue;
            tree.erase(candidates.front());
            tree.insert(id);
            swapped = true;
            break;
        }
        if (!swapped) return false;
    }
}

std::set<EdgeId> spanning_tree_from_order(const MultiGraph& g, const std::vector<EdgeId>& order) {
    std::map<VertexId, VertexId> dsu;
    for (VertexId v : g.vertices()) dsu[v] = v;
    std::function<VertexId(VertexId)> find = [&](VertexId v) {
        while (dsu[v] != v) {
            dsu[v] = dsu[dsu[v]];
            v = dsu[v];
        }
        return v;
    };
    std::set<EdgeId> tree;
    for (EdgeId e : order) {
        Endpoints ep = g.endpoints(e);
        if (ep.is_loop()) continue;
        VertexId a = find(ep.u), b = find(ep.v);
        if (a != b) {
            dsu[a] = b;
            tree.insert(e);
        }
    }
    return tree;
}

// exhaustive include/exclude search with degree caps and a connectivity prune
struct TreeBnB {
    const MultiGraph& g;
    int k;
    std::vector<EdgeId> edge_ids;
    std::map<VertexId, int> deg;
    std::map<VertexId, VertexId> dsu;
    std::set<EdgeId> chosen;
    std::set<EdgeId> result;
    long long nodes = 0;
    long long node_cap = 4'000'000;
    bool found = false;
    bool capped = false;

    VertexId find(std::map<VertexId, VertexId>& d, VertexId v) {
        while (d[v] != v) {
            d[v] = d[d[v]];
            v = d[v];
        }
        return v;
    }

    bool connectable(std::size_t from) {
        std::map<VertexId, VertexId> d = dsu;
        std::size_t comps = g.num_vertices() - chosen.size();
        for (std::size_t i = from; i < edge_ids.size() && comps > 1; ++i) {
            Endpoints ep = g.endpoints(edge_ids[i]);
            VertexId a = find(d, ep.u), b = find(d, ep.v);
            if (a != b) {
                d[a] = b;
                --comps;
            }
        }
        return comps == 1;
    }

    void run(std::size_t i) {
        if (found || capped) return;
        if (++nodes > node_cap) {
            capped = true;
            return;
        }
        if (chosen.size() + 1 == g.num_vertices()) {
            result = chosen;
            found = true;
            return;
        }
        if (i == edge_ids.size() || !connectable(i)) return;
        Endpoints ep = g.endpoints(edge_ids[i]);
        VertexId a = find(dsu, ep.u), b = find(dsu, ep.v);
        if (a != b && deg[ep.u] < k && deg[ep.v] < k) {
            auto saved = dsu;
            dsu[a] = b;
            ++deg[ep.u];
            ++deg[ep.v];
            chosen.insert(edge_ids[i]);
            run(i + 1);
            chosen.erase(edge_ids[i]);
            --deg[ep.u];
            --deg[ep.v];
            dsu = saved;
            if (found || capped) return;
        }
        run(i + 1);
    }
};

}  // namespace

TreeSearchResult bounded_degree_spanning_tree(const MultiGraph& g, int k, std::uint64_t seed) {
    if (k < 2) throw Error(ErrorKind::BadParams, "degree target below 2");
    if (g.num_vertices() == 0) throw Error(ErrorKind::BadParams, "empty graph");
    if (g.connected_components().size() != 1) {
        throw Error(ErrorKind::PreconditionViolated, "graph is not connected");
    }

    std::vector<EdgeId> base_order;
    for (const auto& [id, _] : g.edges()) base_order.push_back(id);

    TreeSearchResult best;
    best.max_degree = static_cast<int>(g.num_vertices());

    auto consider = [&](const std::set<EdgeId>& tree) {
        std::map<VertexId, int> deg;
        int mx = tree_max_degree(g, tree, deg);
        if (mx < best.max_degree) {
            best.max_degree = mx;
            best.edges.assign(tree.begin(), tree.end());
        }
    };

    for (int attempt = 0; attempt < 32; ++attempt) {
        std::vector<EdgeId> order = base_order;
        if (attempt > 0) {
            std::mt19937_64 rng(seed * 1000003ULL + attempt);
            for (std::size_t i = order.size(); i > 1; --i) {
                std::swap(order[i - 1], order[rng() % i]);
            }
        }
        std::set<EdgeId> tree = spanning_tree_from_order(g, order);
        improve_tree(g, tree, k);
        consider(tree);
        best.restarts_used = attempt;
        if (best.max_degree <= k) break;
    }

    if (best.max_degree > k && g.num_vertices() <= 64) {
        TreeBnB bnb{g, k, base_order, {}, {}, {}, {}, 0, 4'000'000, false, false};
        for (VertexId v : g.vertices()) {
            bnb.deg[v] = 0;
            bnb.dsu[v] = v;
        }
        bnb.run(0);
        best.used_branch_and_bound = true;
        if (bnb.found) {
            consider(bnb.result);
        }
    }

    best.reached = best.max_degree <= k;
    return best;
}

std::set<EdgeId> parity_forest(const MultiGraph& tree, const std::map<VertexId, int>& f) {
    if (tree.num_vertices() == 0) throw Error(ErrorKind::BadParams, "empty tree");
    if (tree.num_edges() + 1 != tree.num_vertices() ||
        tree.connected_components().size() != 1) {
        throw Error(ErrorKind::BadParams, "input is not a tree");
    }
    long long sum = 0;
    for (VertexId v : tree.vertices()) {
        auto it = f.find(v);
        if (it == f.end()) throw Error(ErrorKind::BadParams, "parity target missing a vertex");
        sum += it->second % 2;
    }
    if (sum % 2 != 0) throw Error(ErrorKind::OddTotal, "parity targets sum to an odd number");

    VertexId root = tree.lowest_vertex();
    std::set<EdgeId> all;
    for (const auto& [id, _] : tree.edges()) all.insert(id);
    TreeScaffold s = root_tree(tree, all, root);

    std::vector<VertexId> order;
    for (VertexId v : tree.vertices()) order.push_back(v);
    std::sort(order.begin(), order.end(),
              [&](VertexId a, VertexId b) { return s.depth.at(a) > s.depth.at(b); });

    std::map<VertexId, int> current;
    std::set<EdgeId> chosen;
    for (VertexId v : order) {
        if (v == root) continue;
        if (current[v] % 2 != f.at(v) % 2) {
            chosen.insert(s.parent_edge.at(v));
            ++current[v];
            ++current[s.parent.at(v)];
        }
    }
    if (current[root] % 2 != f.at(root) % 2) {
        throw Error(ErrorKind::InvariantBreach, "root parity failed despite even total");
    }
    return chosen;
}

PrepOutcome eulerianize(const MultiGraph& g, int d, int t, std::uint64_t seed,
                        EulerianizeReport* report, bool allow_degree_six) {
    if (d % 2 != 0 || d < 2 * t + 12) {
        throw Error(ErrorKind::PreconditionViolated, "need even d >= 2t+12");
    }
    if (g.min_degree() < static_cast<std::size_t>(d + 6)) {
        throw Error(ErrorKind::PreconditionViolated, "minimum degree below d+6");
    }

    for (int slack = 6; slack <= 7; ++slack) {
        if (g.min_degree() < static_cast<std::size_t>(d + slack)) break;

        PrepOutcome pr = near_regularize(g, d + slack, t);
        if (pr.immersion_found) return pr;
        MultiGraph& w = pr.graph;

        std::set<VertexId> X = well_connected_core(w, d);
        w.restrict_to_logged(pr.log, X);

        TreeSearchResult tree = bounded_degree_spanning_tree(w, 5, seed);
        bool tree_ok = tree.reached || (slack == 7 && tree.max_degree == 6);
        if (!tree_ok) {
            bool can_retry = slack == 6 && allow_degree_six && tree.max_degree == 6 &&
                             g.min_degree() >= static_cast<std::size_t>(d + 7);
            if (can_retry) continue;
            throw Error(ErrorKind::TargetUnreached,
                        "no spanning tree of degree <= 5 (best " +
                            std::to_string(tree.max_degree) + ")");
        }

        MultiGraph tree_graph;
        for (VertexId v : w.vertices()) tree_graph.add_vertex(v);
        for (EdgeId e : tree.edges) {
            Endpoints ep = w.endpoints(e);
            tree_graph.add_edge_with_id(e, ep.u, ep.v);
        }
        std::map<VertexId, int> f;
        for (VertexId v : w.vertices()) f[v] = static_cast<int>(w.degree(v) % 2);
        std::set<EdgeId> forest = parity_forest(tree_graph, f);
        for (EdgeId e : forest) w.remove_edge_logged(pr.log, e);

        if (!w.is_eulerian() || w.deficiency_sum(d) >= d) {
            throw Error(ErrorKind::InvariantBreach,
                        "prepared graph not Eulerian with small deficiency");
        }
        if (report) {
            report->core = X;
            report->nearreg_slack = slack;
            report->tree_max_degree = tree.max_degree;
            report->tree_restarts = tree.restarts_used;
            report->tree_branch_and_bound = tree.used_branch_and_bound;
        }
        return pr;
    }
    throw Error(ErrorKind::TargetUnreached, "degree-six fallback needs minimum degree d+7");
}

}  // namespace immersion
