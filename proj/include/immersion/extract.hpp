#pragma once

// The extraction engine: (t,d)-states, the split-attempt loop with its
// near-matching and double-edge bookkeeping, the grow loop, and the
// vertex-elimination driver that yields a verified K_t certificate.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "immersion/certify.hpp"
#include "immersion/eulprep.hpp"
#include "immersion/multigraph.hpp"

namespace immersion {

struct TDState {
    int t = 0;
    int d = 0;
    MultiGraph g;             // Eulerian, simple, deficiency_sum(d) < d
    std::vector<VertexId> A;  // ordered a_1..a_p
    std::set<VertexId> B;
};

// Verifies the state conditions verbatim; throws InvariantBreach naming the
// violated clause.
void check_state(const TDState& state);

// A = [lowest vertex of degree >= d], B = its d lowest neighbors.
TDState initial_state(const MultiGraph& g, int t, int d);

struct TraceRecord {
    std::string kind;  // state / split / grow / immersion / dense-finish
    std::size_t a_size = 0;
    std::size_t b_size = 0;
    std::size_t v_size = 0;
    std::size_t q_size = 0;
    std::size_t r_size = 0;
};
using TraceSink = std::function<void(const TraceRecord&)>;

struct StepResult {
    enum class Kind { Split, Grow, Immersion };
    Kind kind = Kind::Split;
    MultiGraph graph;   // Split: the graph on V \ A; Immersion: the derived host
    DerivationLog log;  // delta from the state's g (empty for Grow)
    std::vector<VertexId> grow_A;
    std::set<VertexId> grow_B;
    ImmersionCertificate certificate;  // Immersion only, valid on `graph`
};

// One pass of the elimination loop over the ordered A. Requires |A| <= t-1.
StepResult attempt_split(const TDState& state, const TraceSink& trace = {});

// Repeats attempt_split through Grow steps; finishes densely once |A| >= t.
// Never returns Grow.
StepResult find_splittable_or_immersion(const TDState& state0, const TraceSink& trace = {});

// Vertex-elimination driver for Eulerian inputs with small deficiency;
// returns a certificate verified against the g that was passed in.
ImmersionCertificate extract_from_eulerian(const MultiGraph& g, int t, int d,
                                           const TraceSink& trace = {});

struct ExtractOptions {
    std::uint64_t seed = 0;
    bool allow_degree_six = true;  // tree fallback ladder
};

struct ExtractReport {
    int d = 0;
    int split_rounds = 0;
    int grow_steps = 0;
    EulerianizeReport prep;
};

// Top-level driver: requires min degree >= 11t+7, picks the even d in
// {11t, 11t+1}, preprocesses, extracts, lifts, verifies.
ImmersionCertificate extract(const MultiGraph& g, int t, const ExtractOptions& options = {},
                             const TraceSink& trace = {}, ExtractReport* report = nullptr);

namespace detail {

// Auxiliary graph on the edge-objects from `a` into V(G)-A. Parallel copies
// are distinct vertices; indices are H vertex ids.
struct AuxGraph {
    MultiGraph H;                      // vertices 0..k-1
    std::vector<EdgeId> edge_of;       // index -> edge of the working graph
    std::vector<VertexId> endpoint_of; // index -> far endpoint
    std::vector<bool> secondary;
};

class AttemptEngine {
public:
    AttemptEngine(const MultiGraph& g, std::vector<VertexId> A, int t, int d);

    // test seam: preload Q/R bookkeeping mid-attempt
    void inject_context(std::set<VertexId> Q, std::set<VertexId> R);

    AuxGraph build_aux_graph(VertexId a) const;

    enum class Outcome { Eliminated, Cover };
    // Eliminates a_{p-i}; on Cover the target stays in place and last_aux()
    // holds the failing auxiliary graph.
    Outcome eliminate_next();

    bool finished() const { return eliminated_ == A_.size(); }
    VertexId current_target() const;
    const MultiGraph& work() const { return work_; }
    MultiGraph& work() { return work_; }
    DerivationLog& log() { return log_; }
    const std::set<VertexId>& Q() const { return Q_; }
    const std::set<VertexId>& R() const { return R_; }
    const AuxGraph& last_aux() const { return last_aux_; }
    std::size_t eliminated() const { return eliminated_; }

private:
    void check_invariants();

    MultiGraph work_;
    DerivationLog log_;
    std::vector<VertexId> A_;
    std::set<VertexId> A_live_;
    std::map<VertexId, std::size_t> degree0_;
    std::set<VertexId> Q_, R_;
    std::size_t eliminated_ = 0;
    AuxGraph last_aux_;
    int t_ = 0;
    int d_ = 0;
};

}  // namespace detail

}  // namespace immersion
