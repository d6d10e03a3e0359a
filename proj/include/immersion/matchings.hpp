#pragma once

// General-graph maximum matching (blossom), hypomatchability, the
// Edmonds-Gallai cover in the T/M statement form, the small-cover/witness
// dichotomy behind the growth step, and Hall injections.

#include <functional>
#include <map>
#include <set>
#include <variant>
#include <vector>

#include "immersion/multigraph.hpp"

namespace immersion {

struct Matching {
    std::vector<VertexPair> edges;  // vertex-disjoint

    std::size_t size() const { return edges.size(); }
    bool covers(VertexId v) const;
};

// One blossom run: maximum matching plus the set D of vertices missed by
// some maximum matching (outer vertices of the final failed search).
struct MatchingAnalysis {
    Matching matching;
    std::set<VertexId> missable;  // D(G)
};

MatchingAnalysis analyze_matching(const MultiGraph& g);
Matching maximum_matching(const MultiGraph& g);

bool is_hypomatchable(const MultiGraph& g);
// Witness for a queried vertex: perfect matching of g - v. Throws if none.
Matching hypomatchable_witness(const MultiGraph& g, VertexId v);

struct EdmondsGallaiCover {
    std::set<VertexId> T;
    std::vector<std::set<VertexId>> components;  // of G - T, each hypomatchable
    Matching M;                                  // size |T|, one end in T, distinct components
};

EdmondsGallaiCover edmonds_gallai(const MultiGraph& g);
// Checks the four cover invariants against g; throws InvariantBreach.
void validate_cover(const MultiGraph& g, const EdmondsGallaiCover& cover);

struct MatchStructure {
    enum class Kind { PerfectMatching, Hypomatchable, Cover };
    Kind kind;
    Matching perfect;          // PerfectMatching only
    EdmondsGallaiCover cover;  // Cover only
};

MatchStructure match_structure(const MultiGraph& g);

struct SmallCover {
    std::set<VertexId> W;
    std::set<VertexId> T;
};

struct MultipartiteWitness {
    std::vector<std::set<VertexId>> parts;
};

// Dichotomy on a graph h whose complement neither has a perfect matching nor
// is hypomatchable: either h contains the complete multipartite subgraph on
// the Edmonds-Gallai components of the complement with minimum degree >= tau,
// or there is a small cover W with |T| <= |W| <= tau-1 whose vertices are
// adjacent to everything outside T and W.
std::variant<SmallCover, MultipartiteWitness> small_cover_or_witness(const MultiGraph& h, int tau);

// Injective g: S -> V with s g(s) an edge, via augmenting paths. Throws
// HallViolated (naming a violating subset) when Hall's condition fails.
std::map<VertexId, VertexId> hall_injection(
    const std::vector<VertexId>& S,
    const std::function<std::vector<VertexId>(VertexId)>& neighbors_of);

}  // namespace immersion
