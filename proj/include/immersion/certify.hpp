#pragma once

// Immersion certificates, the strong-immersion verifier, and lifting of
// certificates from derived graphs back to the root graph via the log.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "immersion/multigraph.hpp"

namespace immersion {

// Unordered pair of branch indices, 0-based, first < second.
using BranchPair = std::pair<int, int>;

inline BranchPair branch_pair(int i, int j) {
    return i < j ? BranchPair{i, j} : BranchPair{j, i};
}

struct ImmersionCertificate {
    int t = 0;
    std::vector<VertexId> branch;                       // injective, size t
    std::map<BranchPair, std::vector<VertexId>> paths;  // one per pair, vertex-simple
    std::string host_digest;
};

// Count of certificate path-steps per host vertex pair; a certificate is
// edge-feasible iff usage(pair) <= multiplicity(pair) for every pair.
using EdgeUsage = std::map<VertexPair, std::size_t>;

EdgeUsage edge_usage(const ImmersionCertificate& cert);

enum class VerifyClause {
    None,
    BranchInjective,       // (a)
    StepNotEdge,           // (b)
    EdgesNotDisjoint,      // (c)
    InternalBranchVertex,  // (d)
    PairCoverage,          // (e)  missing pair / bad endpoints / malformed path
    PathNotSimple,
};

const char* verify_clause_name(VerifyClause clause);

struct Verdict {
    bool accepted = false;
    VerifyClause clause = VerifyClause::None;
    std::string detail;
    std::optional<VertexPair> offending_pair;
    std::optional<VertexId> offending_vertex;
};

std::string graph_digest(const MultiGraph& g);

// Checks clauses (a)-(e); with strong=false clause (d) is skipped.
// Throws Error(DigestMismatch) when cert.host_digest does not match `host`.
Verdict verify_strong_immersion(const MultiGraph& host, const ImmersionCertificate& cert,
                                bool strong = true);

// Builds a certificate over `host` from branch vertices and paths, filling in
// the digest.
ImmersionCertificate make_certificate(const MultiGraph& host, std::vector<VertexId> branch,
                                      std::map<BranchPair, std::vector<VertexId>> paths);

// Expands edge `e` into the walk of root edges it stands for:
// unfold(e) = unfold(e1) ++ [via] ++ unfold(e2) for a split, else the edge
// itself. Walks of distinct live edges are pairwise edge-disjoint.
std::vector<VertexId> unfold_edge(const MultiGraph& root, const DerivationLog& log, EdgeId e);

// Deletes the cycle at the first repeated vertex, repeatedly. Never grows the
// edge multiset of the walk.
std::vector<VertexId> shortcut_walk(const std::vector<VertexId>& walk);

// Rewrites every path of `derived_cert` (valid on replay(root, log)) into a
// vertex-simple path of root edges; the result verifies on `root`.
// Throws Error(LiftViolation) if a shortcut path would pass through a branch
// vertex -- that never happens for pipeline-produced logs and signals a bug.
ImmersionCertificate lift_certificate(const MultiGraph& root, const DerivationLog& log,
                                      const ImmersionCertificate& derived_cert);

}  // namespace immersion
