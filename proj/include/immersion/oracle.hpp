#pragma once

// Exact decision procedure for K_t immersion on small graphs: enumerate
// branch sets (canonically under twin/class symmetry), then pack
// edge-disjoint paths by iterative slack deepening with degree pruning.
// Ground truth for the pipeline and for the extremal fixtures.

#include <cstdint>
#include <set>
#include <vector>

#include "immersion/certify.hpp"
#include "immersion/multigraph.hpp"

namespace immersion {

struct OracleBudget {
    std::uint64_t max_nodes = 100'000'000;
    double time_cap_seconds = 0.0;  // 0 = no cap
};

struct OracleResult {
    enum class Kind { Yes, No, Exhausted };
    Kind kind = Kind::No;
    ImmersionCertificate certificate;  // Yes only, verified before returning
    std::uint64_t nodes = 0;
};

// Vertices with identical neighborhoods, grouped; swapping members of a
// class is an automorphism. Used to enumerate branch sets canonically.
std::vector<std::set<VertexId>> twin_classes(const MultiGraph& g);

OracleResult decide_immersion(const MultiGraph& g, int t, bool strong = false,
                              const OracleBudget& budget = {}, int jobs = 1);

struct SampledReport {
    int samples = 0;
    int yes = 0;
    int no = 0;
    int exhausted = 0;
    std::vector<std::string> findings;  // any No is a finding against f(t)=t-1
};

// Random graphs with min degree >= t-1 on <= n_max vertices must immerse K_t
// for t in {5,6,7}; a No would contradict the published tightness values.
SampledReport sampled_mindegree_property(int t, int n_max, int samples, std::uint64_t seed,
                                         const OracleBudget& per_instance = {});

}  // namespace immersion
