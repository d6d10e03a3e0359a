#pragma once

// Immersion constructions for dense local structure: a list-edge-coloring
// solver, the common-neighbor clique construction, and the complete
// multipartite recursion. All constructions mutate a working graph through
// split-offs and return a certificate valid on the mutated graph; callers
// lift it through the log.

#include <map>
#include <set>
#include <vector>

#include "immersion/certify.hpp"
#include "immersion/multigraph.hpp"

namespace immersion {

// Candidate colors per edge of a small simple graph H; colors are host
// vertices of B. Feasibility is guaranteed when every list has at least
// |V(H)| colors and H sits inside a clique's line graph.
using ColorLists = std::map<VertexPair, std::vector<VertexId>>;

// Proper coloring with every color drawn from its edge's list. Exact
// backtracking, most-constrained edge first, lowest-id color on ties.
// Throws Error(Infeasible) -- impossible under the size precondition.
std::map<VertexPair, VertexId> list_edge_coloring(const MultiGraph& H, const ColorLists& lists);

// Requires every non-adjacent pair in A to have >= t common neighbors in B.
// Picks the t lowest-id vertices of A, splits two-edge paths through colored
// common neighbors until they induce a clique, and certifies that clique.
ImmersionCertificate immerse_via_common_neighbors(MultiGraph& g, DerivationLog& log,
                                                  const std::set<VertexId>& A,
                                                  const std::set<VertexId>& B, int t);

// Complete multipartite recursion: K_{t,t} base case through the largest
// part, otherwise recurse on the remaining parts and join through a fresh
// transversal set B.
ImmersionCertificate immerse_complete_multipartite(MultiGraph& g, DerivationLog& log,
                                                   const std::vector<std::set<VertexId>>& parts,
                                                   int t);

}  // namespace immersion
