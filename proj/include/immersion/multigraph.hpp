#pragma once

// Multigraph with stable edge identities plus an append-only derivation log.
// Every edge produced by a split-off can be traced back to a walk in the
// root graph, which is what makes certificate lifting possible.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "immersion/errors.hpp"

namespace immersion {

using VertexId = std::uint32_t;
using EdgeId = std::uint64_t;
using VertexPair = std::pair<VertexId, VertexId>;

inline VertexPair ordered_pair(VertexId a, VertexId b) {
    return a <= b ? VertexPair{a, b} : VertexPair{b, a};
}

struct Endpoints {
    VertexId u = 0;
    VertexId v = 0;

    bool is_loop() const { return u == v; }
    VertexId other(VertexId w) const { return w == u ? v : u; }
    VertexPair as_pair() const { return ordered_pair(u, v); }
};

struct SplitOffEvent {
    EdgeId consumed1 = 0;
    EdgeId consumed2 = 0;
    VertexId via = 0;
    EdgeId produced = 0;
    // Endpoints of the produced edge: produced_u is the far end of consumed1,
    // produced_v the far end of consumed2. Fixes unfold orientation.
    VertexId produced_u = 0;
    VertexId produced_v = 0;
};

struct EdgeDeletedEvent {
    EdgeId edge = 0;
};

struct VertexDeletedEvent {
    VertexId vertex = 0;
};

using DerivationEvent = std::variant<SplitOffEvent, EdgeDeletedEvent, VertexDeletedEvent>;

class DerivationLog {
public:
    void record_split(const SplitOffEvent& ev);
    void record_edge_deleted(EdgeId e);
    void record_vertex_deleted(VertexId v);

    const std::vector<DerivationEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }

    // Event that created `e` via a split, or nullptr for root edges.
    const SplitOffEvent* producer_of(EdgeId e) const;
    bool is_dead(EdgeId e) const { return dead_.count(e) != 0; }

    void append(const DerivationLog& tail);
    void clear();

private:
    void mark_dead(EdgeId e);

    std::vector<DerivationEvent> events_;
    std::unordered_map<EdgeId, std::size_t> produced_index_;
    std::unordered_set<EdgeId> dead_;
};

class MultiGraph {
public:
    MultiGraph() = default;

    // Vertices
    VertexId add_vertex();
    void add_vertex(VertexId v);
    void remove_vertex(VertexId v);  // must be isolated
    bool has_vertex(VertexId v) const { return incident_.count(v) != 0; }
    std::size_t num_vertices() const { return incident_.size(); }
    std::vector<VertexId> vertices() const;
    VertexId lowest_vertex() const;

    // Edges
    EdgeId add_edge(VertexId u, VertexId v);
    EdgeId add_edge_with_id(EdgeId id, VertexId u, VertexId v);
    void remove_edge(EdgeId e);
    bool has_edge(EdgeId e) const { return edges_.count(e) != 0; }
    std::size_t num_edges() const { return edges_.size(); }
    Endpoints endpoints(EdgeId e) const;
    const std::map<EdgeId, Endpoints>& edges() const { return edges_; }
    EdgeId next_edge_id() const { return next_edge_id_; }

    // Local structure
    std::size_t degree(VertexId v) const;
    const std::set<EdgeId>& incident_edges(VertexId v) const;
    std::vector<VertexId> neighbors(VertexId v) const;  // distinct, sorted, loops excluded
    std::size_t multiplicity(VertexId u, VertexId v) const;
    bool adjacent(VertexId u, VertexId v) const { return multiplicity(u, v) > 0; }
    std::vector<EdgeId> edges_between(VertexId u, VertexId v) const;
    std::size_t min_degree() const;
    std::size_t max_degree() const;

    bool is_simple() const { return loop_count_ == 0 && parallel_extra_ == 0; }
    std::vector<std::pair<VertexPair, std::size_t>> parallel_pairs() const;  // multiplicity >= 2
    std::vector<EdgeId> loop_edges() const;
    bool is_eulerian() const;
    long long deficiency_sum(int d) const;
    std::size_t boundary_size(const std::set<VertexId>& X) const;

    MultiGraph complement() const;
    MultiGraph induced_subgraph(const std::set<VertexId>& X) const;
    std::vector<std::set<VertexId>> connected_components() const;

    // Mutations that participate in a derivation history.
    EdgeId split_off(DerivationLog& log, EdgeId e1, EdgeId e2, VertexId via);
    void split_off_complete(DerivationLog& log, VertexId v,
                            const std::vector<std::pair<EdgeId, EdgeId>>& pairing);
    void remove_edge_logged(DerivationLog& log, EdgeId e);
    void remove_vertex_and_edges_logged(DerivationLog& log, VertexId v);
    // Deletes everything outside X, logging all deletions.
    void restrict_to_logged(DerivationLog& log, const std::set<VertexId>& X);

    // Canonical "u v" lines (1-based, u <= v), sorted; input to the host digest.
    std::string canonical_edge_list() const;

    void check_consistency() const;

private:
    void insert_edge_record(EdgeId id, VertexId u, VertexId v);
    void erase_edge_record(EdgeId id);

    std::map<VertexId, std::set<EdgeId>> incident_;  // loop edge listed once
    std::map<VertexId, std::size_t> degree_;         // loop counts 2
    std::map<EdgeId, Endpoints> edges_;
    std::map<VertexPair, std::set<EdgeId>> pair_edges_;
    VertexId next_vertex_id_ = 0;
    EdgeId next_edge_id_ = 0;
    std::size_t loop_count_ = 0;
    std::size_t parallel_extra_ = 0;
    std::size_t total_degree_ = 0;
};

// Re-executes `log` on a copy of `root`; the result must be bit-identical to
// the graph the log was recorded against (same EdgeIds, same endpoints).
MultiGraph replay(const MultiGraph& root, const DerivationLog& log);

// Builders used all over the tests and generators.
MultiGraph complete_graph(int n);
MultiGraph cycle_graph(int n);
MultiGraph path_graph(int n);
MultiGraph complete_bipartite(int a, int b);
MultiGraph complete_multipartite_graph(const std::vector<int>& parts);

}  // namespace immersion
