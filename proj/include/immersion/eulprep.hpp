#pragma once

// Preprocessing chain that turns an arbitrary high-minimum-degree graph into
// an Eulerian one with small deficiency, surrendering early with an immersion
// certificate whenever the structure forces one: near-regularization, the
// well-connected core, a bounded-degree spanning tree, and the parity forest.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "immersion/certify.hpp"
#include "immersion/multigraph.hpp"

namespace immersion {

struct MinCut {
    long long value = 0;
    std::set<VertexId> side;  // one shore of the cut
};

// Global minimum edge cut, parallel edges counted with multiplicity; the
// graph must have at least two vertices. Disconnected graphs yield value 0.
MinCut global_min_cut(const MultiGraph& g);

// Non-empty X with boundary < d edges and G[X] (d/2)-edge-connected.
std::set<VertexId> well_connected_core(const MultiGraph& g, int d);

struct PrepOutcome {
    bool immersion_found = false;
    MultiGraph graph;        // prepared graph, or the derived graph carrying the certificate
    DerivationLog log;       // from the input graph
    ImmersionCertificate certificate;  // only when immersion_found
};

// Strongly immersed subgraph with min degree >= d-1 and max degree <= d+t,
// or an immersion certificate out of a dense multipartite neighborhood.
PrepOutcome near_regularize(const MultiGraph& g, int d, int t);

struct TreeSearchResult {
    std::vector<EdgeId> edges;
    int max_degree = 0;
    bool reached = false;   // max_degree <= requested k
    int restarts_used = 0;
    bool used_branch_and_bound = false;
};

// Spanning tree of maximum degree <= k if the search ladder finds one:
// BFS tree + degree-reducing swaps, seeded randomized restarts, exhaustive
// branch-and-bound for small graphs. reached=false carries the best tree.
TreeSearchResult bounded_degree_spanning_tree(const MultiGraph& g, int k,
                                              std::uint64_t seed = 0);

// Forest T' inside the tree with deg_{T'}(v) == f(v) (mod 2) for all v.
// Throws Error(OddTotal) when the parity targets sum to an odd number.
std::set<EdgeId> parity_forest(const MultiGraph& tree, const std::map<VertexId, int>& f);

struct EulerianizeReport {
    std::set<VertexId> core;     // the X kept by well_connected_core
    int nearreg_slack = 6;       // 6, or 7 when the tree fell back to degree 6
    int tree_max_degree = 0;
    int tree_restarts = 0;
    bool tree_branch_and_bound = false;
};

// Full chain; the Prepared graph is Eulerian with deficiency_sum(d) < d.
// Requires min degree >= d+6, even d >= 2t+12.
PrepOutcome eulerianize(const MultiGraph& g, int d, int t, std::uint64_t seed = 0,
                        EulerianizeReport* report = nullptr, bool allow_degree_six = true);

}  // namespace immersion
