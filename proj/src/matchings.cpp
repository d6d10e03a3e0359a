#include "immersion/matchings.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace immersion {

bool Matching::covers(VertexId v) const {
    for (const auto& [a, b] : edges) {
        if (a == v || b == v) return true;
    }
    return false;
}

namespace {

// Blossom algorithm on compact indices. Augmenting searches run per exposed
// root; the final multi-root search (which must fail) yields the outer set,
// i.e. the vertices missed by some maximum matching.
class BlossomSolver {
public:
    explicit BlossomSolver(const MultiGraph& g) {
        if (!g.is_simple()) throw Error(ErrorKind::NotSimple, "matching requires a simple graph");
        ids_ = g.vertices();
        n_ = static_cast<int>(ids_.size());
        for (int i = 0; i < n_; ++i) index_[ids_[i]] = i;
        adj_.assign(n_, {});
        for (const auto& [_, ep] : g.edges()) {
            int u = index_.at(ep.u), v = index_.at(ep.v);
            adj_[u].push_back(v);
            adj_[v].push_back(u);
        }
        for (auto& row : adj_) std::sort(row.begin(), row.end());
        match_.assign(n_, -1);
    }

    MatchingAnalysis run() {
        outer_.assign(n_, false);  // stays all-false when the matching is perfect
        // greedy seed keeps the number of augmenting searches low
        for (int v = 0; v < n_; ++v) {
            if (match_[v] != -1) continue;
            for (int to : adj_[v]) {
                if (match_[to] == -1) {
                    match_[v] = to;
                    match_[to] = v;
                    break;
                }
            }
        }
        for (int v = 0; v < n_; ++v) {
            if (match_[v] != -1) continue;
            int end = find_path({v});
            if (end != -1) augment(end);
        }
        // final failed search from all exposed vertices: outer set = D(G)
        std::vector<int> exposed;
        for (int v = 0; v < n_; ++v) {
            if (match_[v] == -1) exposed.push_back(v);
        }
        if (exposed.empty()) {
            outer_.assign(n_, false);  // perfect matching misses nothing
        } else {
            int end = find_path(exposed);
            if (end != -1) {
                throw Error(ErrorKind::InvariantBreach, "augmenting path found past maximality");
            }
        }
        MatchingAnalysis out;
        for (int v = 0; v < n_; ++v) {
            if (match_[v] > v) out.matching.edges.push_back(ordered_pair(ids_[v], ids_[match_[v]]));
        }
        for (int v = 0; v < n_; ++v) {
            if (outer_[v]) out.missable.insert(ids_[v]);
        }
        return out;
    }

private:
    int lca(int a, int b) {
        std::vector<bool> mark(n_, false);
        while (true) {
            a = base_[a];
            mark[a] = true;
            if (match_[a] == -1) break;
            a = p_[match_[a]];
        }
        while (true) {
            b = base_[b];
            if (mark[b]) return b;
            if (match_[b] == -1) {
                throw Error(ErrorKind::InvariantBreach, "blossom lca across two search trees");
            }
            b = p_[match_[b]];
        }
    }

    void mark_path(int v, int b, int child, std::vector<bool>& blossom) {
        while (base_[v] != b) {
            blossom[base_[v]] = true;
            blossom[base_[match_[v]]] = true;
            p_[v] = child;
            child = match_[v];
            v = p_[match_[v]];
        }
    }

    int find_path(const std::vector<int>& roots) {
        outer_.assign(n_, false);
        p_.assign(n_, -1);
        base_.resize(n_);
        std::iota(base_.begin(), base_.end(), 0);
        is_root_.assign(n_, false);
        std::deque<int> q;
        for (int r : roots) {
            is_root_[r] = true;
            outer_[r] = true;
            q.push_back(r);
        }
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int to : adj_[v]) {
                if (base_[v] == base_[to] || match_[v] == to) continue;
                if (is_root_[to] || (match_[to] != -1 && p_[match_[to]] != -1)) {
                    int curbase = lca(v, to);
                    std::vector<bool> blossom(n_, false);
                    mark_path(v, curbase, to, blossom);
                    mark_path(to, curbase, v, blossom);
                    for (int i = 0; i < n_; ++i) {
                        if (blossom[base_[i]]) {
                            base_[i] = curbase;
                            if (!outer_[i]) {
                                outer_[i] = true;
                                q.push_back(i);
                            }
                        }
                    }
                } else if (p_[to] == -1) {
                    p_[to] = v;
                    if (match_[to] == -1) return to;
                    outer_[match_[to]] = true;
                    q.push_back(match_[to]);
                }
            }
        }
        return -1;
    }

    void augment(int to) {
        while (to != -1) {
            int pv = p_[to];
            int ppv = match_[pv];
            match_[to] = pv;
            match_[pv] = to;
            to = ppv;
        }
    }

    int n_ = 0;
    std::vector<VertexId> ids_;
    std::map<VertexId, int> index_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_, p_, base_;
    std::vector<bool> outer_, is_root_;
};

std::string vertex_set_text(const std::set<VertexId>& s) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (VertexId v : s) {
        if (!first) os << ',';
        os << v;
        first = false;
    }
    os << '}';
    return os.str();
}

}  // namespace

MatchingAnalysis analyze_matching(const MultiGraph& g) { return BlossomSolver(g).run(); }

Matching maximum_matching(const MultiGraph& g) { return analyze_matching(g).matching; }

bool is_hypomatchable(const MultiGraph& g) {
    std::size_t n = g.num_vertices();
    if (n == 0 || n % 2 == 0) return false;
    MatchingAnalysis a = analyze_matching(g);
    if (2 * a.matching.size() != n - 1) return false;
    return a.missable.size() == n;
}

Matching hypomatchable_witness(const MultiGraph& g, VertexId v) {
    std::set<VertexId> rest;
    for (VertexId w : g.vertices()) {
        if (w != v) rest.insert(w);
    }
    MultiGraph sub = g.induced_subgraph(rest);
    Matching m = maximum_matching(sub);
    if (2 * m.size() != rest.size()) {
        throw Error(ErrorKind::PreconditionViolated,
                    "G - " + std::to_string(v) + " has no perfect matching");
    }
    return m;
}

namespace {

// N(D) \ D for the classical Gallai-Edmonds set A(G).
std::set<VertexId> attachment_set(const MultiGraph& g, const std::set<VertexId>& D) {
    std::set<VertexId> A;
    for (VertexId v : D) {
        for (VertexId w : g.neighbors(v)) {
            if (!D.count(w)) A.insert(w);
        }
    }
    return A;
}

}  // namespace

EdmondsGallaiCover edmonds_gallai(const MultiGraph& g) {
    // Refinement: start from A(G); as long as a component of G - T is not
    // hypomatchable, either move one vertex of a perfectly matchable component
    // into T or merge the inner decomposition's attachment set.
    MatchingAnalysis top = analyze_matching(g);
    std::set<VertexId> T = attachment_set(g, top.missable);

    while (true) {
        std::set<VertexId> rest;
        for (VertexId v : g.vertices()) {
            if (!T.count(v)) rest.insert(v);
        }
        MultiGraph remainder = g.induced_subgraph(rest);
        bool refined = false;
        for (const auto& comp : remainder.connected_components()) {
            MultiGraph sub = g.induced_subgraph(comp);
            if (is_hypomatchable(sub)) continue;
            MatchingAnalysis inner = analyze_matching(sub);
            if (2 * inner.matching.size() == comp.size()) {
                T.insert(*comp.begin());
            } else {
                std::set<VertexId> A_inner = attachment_set(sub, inner.missable);
                if (A_inner.empty()) {
                    throw Error(ErrorKind::InvariantBreach,
                                "deficient connected component with empty attachment set");
                }
                T.insert(A_inner.begin(), A_inner.end());
            }
            refined = true;
            break;
        }
        if (!refined) break;
    }

    EdmondsGallaiCover cover;
    cover.T = T;
    std::set<VertexId> rest;
    for (VertexId v : g.vertices()) {
        if (!T.count(v)) rest.insert(v);
    }
    cover.components = g.induced_subgraph(rest).connected_components();
    std::sort(cover.components.begin(), cover.components.end(),
              [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });

    // match T into distinct components (always possible for the refined T)
    std::map<VertexId, int> comp_of;
    for (std::size_t i = 0; i < cover.components.size(); ++i) {
        for (VertexId v : cover.components[i]) comp_of[v] = static_cast<int>(i);
    }
    std::vector<VertexId> t_list(T.begin(), T.end());
    try {
        auto inj = hall_injection(t_list, [&](VertexId t) {
            std::set<int> comps;
            for (VertexId w : g.neighbors(t)) {
                auto it = comp_of.find(w);
                if (it != comp_of.end()) comps.insert(it->second);
            }
            std::vector<VertexId> out(comps.begin(), comps.end());
            return out;
        });
        for (VertexId t : t_list) {
            const auto& comp = cover.components[inj.at(t)];
            VertexId partner = 0;
            bool found = false;
            for (VertexId w : g.neighbors(t)) {
                if (comp.count(w)) {
                    partner = w;
                    found = true;
                    break;
                }
            }
            if (!found) throw Error(ErrorKind::InvariantBreach, "injection target not adjacent");
            cover.M.edges.push_back(ordered_pair(t, partner));
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::HallViolated) {
            throw Error(ErrorKind::InvariantBreach,
                        "cover set not matchable into components: " + std::string(e.what()));
        }
        throw;
    }

    validate_cover(g, cover);
    return cover;
}

void validate_cover(const MultiGraph& g, const EdmondsGallaiCover& cover) {
    if (cover.M.size() != cover.T.size()) {
        throw Error(ErrorKind::InvariantBreach, "|M| != |T| in Edmonds-Gallai cover");
    }
    std::set<VertexId> covered;
    std::set<int> used_components;
    std::map<VertexId, int> comp_of;
    std::set<VertexId> in_components;
    for (std::size_t i = 0; i < cover.components.size(); ++i) {
        for (VertexId v : cover.components[i]) {
            comp_of[v] = static_cast<int>(i);
            in_components.insert(v);
        }
    }
    // components partition V \ T
    for (VertexId v : g.vertices()) {
        bool in_T = cover.T.count(v) != 0;
        if (in_T == (in_components.count(v) != 0)) {
            throw Error(ErrorKind::InvariantBreach, "components do not partition V \\ T");
        }
    }
    for (const auto& [a, b] : cover.M.edges) {
        if (!g.adjacent(a, b)) throw Error(ErrorKind::InvariantBreach, "M edge not in graph");
        bool a_in = cover.T.count(a) != 0, b_in = cover.T.count(b) != 0;
        if (a_in == b_in) {
            throw Error(ErrorKind::InvariantBreach, "M edge must have exactly one end in T");
        }
        VertexId t = a_in ? a : b;
        VertexId c = a_in ? b : a;
        if (covered.count(t) || covered.count(c)) {
            throw Error(ErrorKind::InvariantBreach, "M is not a matching");
        }
        covered.insert(t);
        covered.insert(c);
        if (!used_components.insert(comp_of.at(c)).second) {
            throw Error(ErrorKind::InvariantBreach, "two M edges end in the same component");
        }
    }
    for (const auto& comp : cover.components) {
        if (!is_hypomatchable(g.induced_subgraph(comp))) {
            throw Error(ErrorKind::InvariantBreach,
                        "component " + vertex_set_text(comp) + " not hypomatchable");
        }
    }
}

MatchStructure match_structure(const MultiGraph& g) {
    MatchStructure out;
    MatchingAnalysis a = analyze_matching(g);
    if (2 * a.matching.size() == g.num_vertices()) {
        out.kind = MatchStructure::Kind::PerfectMatching;
        out.perfect = a.matching;
        return out;
    }
    if (g.num_vertices() % 2 == 1 && 2 * a.matching.size() == g.num_vertices() - 1 &&
        a.missable.size() == g.num_vertices()) {
        out.kind = MatchStructure::Kind::Hypomatchable;
        return out;
    }
    out.kind = MatchStructure::Kind::Cover;
    out.cover = edmonds_gallai(g);
    return out;
}

std::variant<SmallCover, MultipartiteWitness> small_cover_or_witness(const MultiGraph& h, int tau) {
    MultiGraph hbar = h.complement();
    MatchStructure ms = match_structure(hbar);
    if (ms.kind != MatchStructure::Kind::Cover) {
        throw Error(ErrorKind::PreconditionViolated,
                    "complement has a perfect matching or is hypomatchable");
    }
    const EdmondsGallaiCover& cover = ms.cover;
    std::size_t total = 0;
    for (const auto& part : cover.components) total += part.size();

    std::size_t max_size = 0;
    for (const auto& part : cover.components) max_size = std::max(max_size, part.size());
    std::size_t min_part_degree = total - max_size;
    if (min_part_degree >= static_cast<std::size_t>(tau)) {
        return MultipartiteWitness{cover.components};
    }

    // Keep one part minimizing part-degree (= a largest part, lowest id on
    // ties); W is everything else.
    std::size_t keep = 0;
    for (std::size_t i = 1; i < cover.components.size(); ++i) {
        if (cover.components[i].size() > cover.components[keep].size()) keep = i;
    }
    SmallCover sc;
    sc.T = cover.T;
    for (std::size_t i = 0; i < cover.components.size(); ++i) {
        if (i != keep) sc.W.insert(cover.components[i].begin(), cover.components[i].end());
    }
    if (sc.W.empty() || sc.W.size() < sc.T.size() ||
        sc.W.size() > static_cast<std::size_t>(tau) - 1) {
        throw Error(ErrorKind::InvariantBreach, "small cover size bounds violated");
    }
    for (VertexId w : sc.W) {
        for (VertexId v : cover.components[keep]) {
            if (!h.adjacent(w, v)) {
                throw Error(ErrorKind::InvariantBreach,
                            "small cover vertex " + std::to_string(w) +
                                " misses outside vertex " + std::to_string(v));
            }
        }
        if (h.degree(w) + static_cast<std::size_t>(tau) < h.num_vertices()) {
            throw Error(ErrorKind::InvariantBreach,
                        "small cover vertex " + std::to_string(w) + " has low degree");
        }
    }
    return sc;
}

std::map<VertexId, VertexId> hall_injection(
    const std::vector<VertexId>& S,
    const std::function<std::vector<VertexId>(VertexId)>& neighbors_of) {
    std::map<VertexId, VertexId> assign;          // S -> V
    std::map<VertexId, VertexId> owner;           // V -> S
    std::function<bool(VertexId, std::set<VertexId>&, std::set<VertexId>&)> try_assign =
        [&](VertexId s, std::set<VertexId>& seen_right, std::set<VertexId>& seen_left) {
            seen_left.insert(s);
            for (VertexId y : neighbors_of(s)) {
                if (seen_right.count(y)) continue;
                seen_right.insert(y);
                auto it = owner.find(y);
                if (it == owner.end() || try_assign(it->second, seen_right, seen_left)) {
                    owner[y] = s;
                    assign[s] = y;
                    return true;
                }
            }
            return false;
        };
    for (VertexId s : S) {
        std::set<VertexId> seen_right, seen_left;
        if (!try_assign(s, seen_right, seen_left)) {
            throw Error(ErrorKind::HallViolated,
                        "no system of distinct representatives; violating set " +
                            vertex_set_text(seen_left));
        }
    }
    return assign;
}

}  // namespace immersion
