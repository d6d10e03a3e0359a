#include "immersion/dense.hpp"

#include <algorithm>
#include <limits>

namespace immersion {

namespace {

struct ColoringProblem {
    std::vector<VertexPair> edges;
    std::vector<std::vector<VertexId>> lists;
    std::vector<std::vector<int>> conflicts;  // edges sharing an endpoint
    std::vector<VertexId> color;              // assigned
    std::vector<bool> done;

    bool solve(int assigned) {
        if (assigned == static_cast<int>(edges.size())) return true;
        // most constrained next: fewest usable colors left
        int pick = -1;
        std::size_t best = std::numeric_limits<std::size_t>::max();
        for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
            if (done[i]) continue;
            std::size_t usable = 0;
            for (VertexId c : lists[i]) {
                if (allowed(i, c)) ++usable;
            }
            if (usable < best) {
                best = usable;
                pick = i;
            }
        }
        if (best == 0) return false;
        done[pick] = true;
        for (VertexId c : lists[pick]) {
            if (!allowed(pick, c)) continue;
            color[pick] = c;
            if (solve(assigned + 1)) return true;
        }
        done[pick] = false;
        return false;
    }

    bool allowed(int i, VertexId c) const {
        for (int j : conflicts[i]) {
            if (done[j] && color[j] == c) return false;
        }
        return true;
    }
};

}  // namespace

std::map<VertexPair, VertexId> list_edge_coloring(const MultiGraph& H, const ColorLists& lists) {
    if (!H.is_simple()) throw Error(ErrorKind::NotSimple, "coloring host must be simple");
    ColoringProblem p;
    for (const auto& [_, ep] : H.edges()) {
        VertexPair pair = ep.as_pair();
        auto it = lists.find(pair);
        if (it == lists.end()) {
            throw Error(ErrorKind::BadParams, "missing color list for an edge");
        }
        p.edges.push_back(pair);
        std::vector<VertexId> colors = it->second;
        std::sort(colors.begin(), colors.end());
        colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
        p.lists.push_back(std::move(colors));
    }
    int m = static_cast<int>(p.edges.size());
    p.conflicts.assign(m, {});
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const auto& a = p.edges[i];
            const auto& b = p.edges[j];
            if (a.first == b.first || a.first == b.second || a.second == b.first ||
                a.second == b.second) {
                p.conflicts[i].push_back(j);
                p.conflicts[j].push_back(i);
            }
        }
    }
    p.color.assign(m, 0);
    p.done.assign(m, false);
    if (!p.solve(0)) {
        throw Error(ErrorKind::Infeasible, "no proper coloring within the given lists");
    }
    std::map<VertexPair, VertexId> out;
    for (int i = 0; i < m; ++i) out[p.edges[i]] = p.color[i];
    return out;
}

ImmersionCertificate immerse_via_common_neighbors(MultiGraph& g, DerivationLog& log,
                                                  const std::set<VertexId>& A,
                                                  const std::set<VertexId>& B, int t) {
    if (t < 1) throw Error(ErrorKind::BadParams, "t must be positive");
    for (VertexId a : A) {
        if (B.count(a)) throw Error(ErrorKind::PreconditionViolated, "A and B intersect");
    }
    if (A.size() < static_cast<std::size_t>(t)) {
        throw Error(ErrorKind::PreconditionViolated, "|A| < t");
    }

    // common neighbors in B, counting adjacency in the current multigraph
    auto common_in_B = [&](VertexId u, VertexId v) {
        std::vector<VertexId> common;
        for (VertexId b : B) {
            if (g.adjacent(u, b) && g.adjacent(v, b)) common.push_back(b);
        }
        return common;
    };
    {
        std::vector<VertexId> all(A.begin(), A.end());
        for (std::size_t i = 0; i < all.size(); ++i) {
            for (std::size_t j = i + 1; j < all.size(); ++j) {
                if (!g.adjacent(all[i], all[j]) &&
                    common_in_B(all[i], all[j]).size() < static_cast<std::size_t>(t)) {
                    throw Error(ErrorKind::PreconditionViolated,
                                "pair {" + std::to_string(all[i]) + "," + std::to_string(all[j]) +
                                    "} has fewer than t common neighbors in B");
                }
            }
        }
    }

    std::vector<VertexId> branch(A.begin(), A.end());
    branch.resize(t);

    // H = complement of the branch-induced skeleton; its edges are the pairs
    // that still need a two-edge path through B.
    MultiGraph H;
    for (VertexId v : branch) H.add_vertex(v);
    ColorLists lists;
    for (int i = 0; i < t; ++i) {
        for (int j = i + 1; j < t; ++j) {
            if (!g.adjacent(branch[i], branch[j])) {
                VertexPair pair = ordered_pair(branch[i], branch[j]);
                H.add_edge(pair.first, pair.second);
                lists[pair] = common_in_B(pair.first, pair.second);
            }
        }
    }
    std::map<VertexPair, VertexId> phi = list_edge_coloring(H, lists);

    // Split off u-b, b-v for each colored pair; properness keeps the consumed
    // edges at each color vertex pairwise distinct.
    std::set<EdgeId> consumed;
    for (const auto& [_, ep] : H.edges()) {
        VertexId u = ep.u, v = ep.v;
        VertexId b = phi.at(ep.as_pair());
        EdgeId eu = 0, ev = 0;
        bool found_u = false, found_v = false;
        for (EdgeId e : g.edges_between(u, b)) {
            if (!consumed.count(e)) {
                eu = e;
                found_u = true;
                break;
            }
        }
        for (EdgeId e : g.edges_between(b, v)) {
            if (!consumed.count(e)) {
                ev = e;
                found_v = true;
                break;
            }
        }
        if (!found_u || !found_v) {
            throw Error(ErrorKind::InvariantBreach,
                        "color vertex " + std::to_string(b) + " lost an edge it must provide");
        }
        consumed.insert(eu);
        consumed.insert(ev);
        g.split_off(log, eu, ev, b);
    }

    std::map<BranchPair, std::vector<VertexId>> paths;
    for (int i = 0; i < t; ++i) {
        for (int j = i + 1; j < t; ++j) {
            paths[{i, j}] = {branch[i], branch[j]};
        }
    }
    return make_certificate(g, branch, std::move(paths));
}

namespace {

ImmersionCertificate immerse_multipartite_rec(MultiGraph& g, DerivationLog& log,
                                              std::vector<std::set<VertexId>> parts, int t) {
    std::set<VertexId> all;
    for (const auto& p : parts) all.insert(p.begin(), p.end());
    if (t <= 1) {
        if (all.empty()) throw Error(ErrorKind::PreconditionViolated, "no vertices left");
        return make_certificate(g, {*all.begin()}, {});
    }

    // largest part first; the earliest such part on ties
    std::size_t pick = 0;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i].size() > parts[pick].size()) pick = i;
    }
    std::set<VertexId> V1 = parts[pick];
    int s = static_cast<int>(V1.size());
    std::set<VertexId> rest;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i != pick) rest.insert(parts[i].begin(), parts[i].end());
    }

    if (s >= t) {
        // K_{t,t} sits between V1 and the other parts
        return immerse_via_common_neighbors(g, log, V1, rest, t);
    }

    std::vector<std::set<VertexId>> remaining;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i != pick) remaining.push_back(parts[i]);
    }
    ImmersionCertificate inner = immerse_multipartite_rec(g, log, remaining, t - s);

    // transversal of size s in the remaining parts, off the inner branch set
    std::set<VertexId> inner_branch(inner.branch.begin(), inner.branch.end());
    std::set<VertexId> B;
    for (VertexId v : rest) {
        if (!inner_branch.count(v)) {
            B.insert(v);
            if (static_cast<int>(B.size()) == s) break;
        }
    }
    if (static_cast<int>(B.size()) != s) {
        throw Error(ErrorKind::PreconditionViolated, "not enough vertices for the transversal");
    }
    ImmersionCertificate side = immerse_via_common_neighbors(g, log, V1, B, s);

    // combined branch: the K_s from V1 first, then the recursive K_{t-s}
    std::vector<VertexId> branch = side.branch;
    branch.insert(branch.end(), inner.branch.begin(), inner.branch.end());
    std::map<BranchPair, std::vector<VertexId>> paths;
    for (const auto& [key, path] : side.paths) paths[key] = path;
    for (const auto& [key, path] : inner.paths) {
        paths[{key.first + s, key.second + s}] = path;
    }
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < t - s; ++j) {
            VertexId u = side.branch[i];
            VertexId w = inner.branch[j];
            if (!g.adjacent(u, w)) {
                throw Error(ErrorKind::InvariantBreach,
                            "missing cross edge in multipartite recursion");
            }
            paths[{i, s + j}] = {u, w};
        }
    }
    return make_certificate(g, std::move(branch), std::move(paths));
}

}  // namespace

ImmersionCertificate immerse_complete_multipartite(MultiGraph& g, DerivationLog& log,
                                                   const std::vector<std::set<VertexId>>& parts,
                                                   int t) {
    if (t < 1) throw Error(ErrorKind::BadParams, "t must be positive");
    std::size_t total = 0;
    for (const auto& p : parts) {
        if (p.empty()) throw Error(ErrorKind::BadParams, "empty part");
        total += p.size();
    }
    // cross-part adjacency and minimum degree within the multipartite subgraph
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (total - parts[i].size() < static_cast<std::size_t>(t)) {
            throw Error(ErrorKind::PreconditionViolated,
                        "multipartite subgraph has minimum degree below t");
        }
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
            for (VertexId u : parts[i]) {
                for (VertexId v : parts[j]) {
                    if (u == v || !g.adjacent(u, v)) {
                        throw Error(ErrorKind::PreconditionViolated,
                                    "parts are not completely joined in the host");
                    }
                }
            }
        }
    }
    return immerse_multipartite_rec(g, log, parts, t);
}

}  // namespace immersion
