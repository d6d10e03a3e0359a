#include "immersion/multigraph.hpp"

#include <algorithm>
#include <sstream>

namespace immersion {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::UnknownVertex: return "UnknownVertex";
        case ErrorKind::UnknownEdge: return "UnknownEdge";
        case ErrorKind::SameEdge: return "SameEdge";
        case ErrorKind::EdgesNotAdjacentAtVia: return "EdgesNotAdjacentAtVia";
        case ErrorKind::NotSimple: return "NotSimple";
        case ErrorKind::OddDegree: return "OddDegree";
        case ErrorKind::InvalidPairing: return "InvalidPairing";
        case ErrorKind::DigestMismatch: return "DigestMismatch";
        case ErrorKind::LiftViolation: return "LiftViolation";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::HallViolated: return "HallViolated";
        case ErrorKind::Infeasible: return "Infeasible";
        case ErrorKind::OddTotal: return "OddTotal";
        case ErrorKind::TargetUnreached: return "TargetUnreached";
        case ErrorKind::NoHighDegreeVertex: return "NoHighDegreeVertex";
        case ErrorKind::DegreeTooLow: return "DegreeTooLow";
        case ErrorKind::InvariantBreach: return "InvariantBreach";
        case ErrorKind::BadParams: return "BadParams";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Error";
}

// ---------------------------------------------------------------------------
// DerivationLog

void DerivationLog::mark_dead(EdgeId e) {
    if (dead_.count(e)) {
        throw Error(ErrorKind::InvariantBreach,
                    "edge " + std::to_string(e) + " consumed or deleted twice in log");
    }
    dead_.insert(e);
}

void DerivationLog::record_split(const SplitOffEvent& ev) {
    if (ev.consumed1 == ev.consumed2) {
        throw Error(ErrorKind::SameEdge, "split-off event consumes one edge twice");
    }
    mark_dead(ev.consumed1);
    mark_dead(ev.consumed2);
    produced_index_[ev.produced] = events_.size();
    events_.emplace_back(ev);
}

void DerivationLog::record_edge_deleted(EdgeId e) {
    mark_dead(e);
    events_.emplace_back(EdgeDeletedEvent{e});
}

void DerivationLog::record_vertex_deleted(VertexId v) {
    events_.emplace_back(VertexDeletedEvent{v});
}

const SplitOffEvent* DerivationLog::producer_of(EdgeId e) const {
    auto it = produced_index_.find(e);
    if (it == produced_index_.end()) return nullptr;
    return &std::get<SplitOffEvent>(events_[it->second]);
}

void DerivationLog::append(const DerivationLog& tail) {
    for (const auto& ev : tail.events_) {
        if (const auto* s = std::get_if<SplitOffEvent>(&ev)) {
            record_split(*s);
        } else if (const auto* d = std::get_if<EdgeDeletedEvent>(&ev)) {
            record_edge_deleted(d->edge);
        } else {
            record_vertex_deleted(std::get<VertexDeletedEvent>(ev).vertex);
        }
    }
}

void DerivationLog::clear() {
    events_.clear();
    produced_index_.clear();
    dead_.clear();
}

// ---------------------------------------------------------------------------
// MultiGraph

VertexId MultiGraph::add_vertex() {
    VertexId v = next_vertex_id_;
    add_vertex(v);
    return v;
}

void MultiGraph::add_vertex(VertexId v) {
    if (incident_.count(v)) {
        throw Error(ErrorKind::BadParams, "vertex " + std::to_string(v) + " already present");
    }
    incident_[v] = {};
    degree_[v] = 0;
    if (v >= next_vertex_id_) next_vertex_id_ = v + 1;
}

void MultiGraph::remove_vertex(VertexId v) {
    auto it = incident_.find(v);
    if (it == incident_.end()) {
        throw Error(ErrorKind::UnknownVertex, std::to_string(v));
    }
    if (!it->second.empty()) {
        throw Error(ErrorKind::BadParams,
                    "vertex " + std::to_string(v) + " still has incident edges");
    }
    incident_.erase(it);
    degree_.erase(v);
}

std::vector<VertexId> MultiGraph::vertices() const {
    std::vector<VertexId> out;
    out.reserve(incident_.size());
    for (const auto& [v, _] : incident_) out.push_back(v);
    return out;
}

VertexId MultiGraph::lowest_vertex() const {
    if (incident_.empty()) throw Error(ErrorKind::BadParams, "empty graph");
    return incident_.begin()->first;
}

void MultiGraph::insert_edge_record(EdgeId id, VertexId u, VertexId v) {
    edges_[id] = Endpoints{u, v};
    incident_[u].insert(id);
    incident_[v].insert(id);
    if (u == v) {
        degree_[u] += 2;
        ++loop_count_;
    } else {
        degree_[u] += 1;
        degree_[v] += 1;
    }
    auto& bucket = pair_edges_[ordered_pair(u, v)];
    if (!bucket.empty()) ++parallel_extra_;
    bucket.insert(id);
    total_degree_ += 2;
}

void MultiGraph::erase_edge_record(EdgeId id) {
    Endpoints ep = edges_.at(id);
    edges_.erase(id);
    incident_[ep.u].erase(id);
    incident_[ep.v].erase(id);
    if (ep.is_loop()) {
        degree_[ep.u] -= 2;
        --loop_count_;
    } else {
        degree_[ep.u] -= 1;
        degree_[ep.v] -= 1;
    }
    auto it = pair_edges_.find(ep.as_pair());
    it->second.erase(id);
    if (it->second.empty()) {
        pair_edges_.erase(it);
    } else {
        --parallel_extra_;
    }
    total_degree_ -= 2;
}

EdgeId MultiGraph::add_edge(VertexId u, VertexId v) {
    return add_edge_with_id(next_edge_id_, u, v);
}

EdgeId MultiGraph::add_edge_with_id(EdgeId id, VertexId u, VertexId v) {
    if (!has_vertex(u)) throw Error(ErrorKind::UnknownVertex, std::to_string(u));
    if (!has_vertex(v)) throw Error(ErrorKind::UnknownVertex, std::to_string(v));
    if (edges_.count(id)) {
        throw Error(ErrorKind::BadParams, "edge id " + std::to_string(id) + " already present");
    }
    insert_edge_record(id, u, v);
    if (id >= next_edge_id_) next_edge_id_ = id + 1;
    return id;
}

void MultiGraph::remove_edge(EdgeId e) {
    if (!edges_.count(e)) throw Error(ErrorKind::UnknownEdge, std::to_string(e));
    erase_edge_record(e);
}

Endpoints MultiGraph::endpoints(EdgeId e) const {
    auto it = edges_.find(e);
    if (it == edges_.end()) throw Error(ErrorKind::UnknownEdge, std::to_string(e));
    return it->second;
}

std::size_t MultiGraph::degree(VertexId v) const {
    auto it = degree_.find(v);
    if (it == degree_.end()) throw Error(ErrorKind::UnknownVertex, std::to_string(v));
    return it->second;
}

const std::set<EdgeId>& MultiGraph::incident_edges(VertexId v) const {
    auto it = incident_.find(v);
    if (it == incident_.end()) throw Error(ErrorKind::UnknownVertex, std::to_string(v));
    return it->second;
}

std::vector<VertexId> MultiGraph::neighbors(VertexId v) const {
    std::set<VertexId> out;
    for (EdgeId e : incident_edges(v)) {
        Endpoints ep = edges_.at(e);
        if (!ep.is_loop()) out.insert(ep.other(v));
    }
    return {out.begin(), out.end()};
}

std::size_t MultiGraph::multiplicity(VertexId u, VertexId v) const {
    auto it = pair_edges_.find(ordered_pair(u, v));
    return it == pair_edges_.end() ? 0 : it->second.size();
}

std::vector<EdgeId> MultiGraph::edges_between(VertexId u, VertexId v) const {
    auto it = pair_edges_.find(ordered_pair(u, v));
    if (it == pair_edges_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::size_t MultiGraph::min_degree() const {
    if (degree_.empty()) throw Error(ErrorKind::BadParams, "empty graph");
    std::size_t best = SIZE_MAX;
    for (const auto& [_, d] : degree_) best = std::min(best, d);
    return best;
}

std::size_t MultiGraph::max_degree() const {
    std::size_t best = 0;
    for (const auto& [_, d] : degree_) best = std::max(best, d);
    return best;
}

std::vector<std::pair<VertexPair, std::size_t>> MultiGraph::parallel_pairs() const {
    std::vector<std::pair<VertexPair, std::size_t>> out;
    for (const auto& [pair, bucket] : pair_edges_) {
        if (bucket.size() >= 2 && pair.first != pair.second) out.push_back({pair, bucket.size()});
    }
    return out;
}

std::vector<EdgeId> MultiGraph::loop_edges() const {
    std::vector<EdgeId> out;
    for (const auto& [id, ep] : edges_) {
        if (ep.is_loop()) out.push_back(id);
    }
    return out;
}

bool MultiGraph::is_eulerian() const {
    for (const auto& [_, d] : degree_) {
        if (d % 2 != 0) return false;
    }
    return true;
}

long long MultiGraph::deficiency_sum(int d) const {
    long long sum = 0;
    for (const auto& [_, deg] : degree_) {
        if (static_cast<long long>(deg) < d) sum += d - static_cast<long long>(deg);
    }
    return sum;
}

std::size_t MultiGraph::boundary_size(const std::set<VertexId>& X) const {
    for (VertexId v : X) {
        if (!has_vertex(v)) throw Error(ErrorKind::UnknownVertex, std::to_string(v));
    }
    std::size_t count = 0;
    for (const auto& [_, ep] : edges_) {
        if (X.count(ep.u) + X.count(ep.v) == 1) ++count;
    }
    return count;
}

MultiGraph MultiGraph::complement() const {
    if (!is_simple()) throw Error(ErrorKind::NotSimple, "complement requires a simple graph");
    MultiGraph out;
    std::vector<VertexId> vs = vertices();
    for (VertexId v : vs) out.add_vertex(v);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            if (!adjacent(vs[i], vs[j])) out.add_edge(vs[i], vs[j]);
        }
    }
    return out;
}

MultiGraph MultiGraph::induced_subgraph(const std::set<VertexId>& X) const {
    MultiGraph out;
    for (VertexId v : X) {
        if (!has_vertex(v)) throw Error(ErrorKind::UnknownVertex, std::to_string(v));
        out.add_vertex(v);
    }
    for (const auto& [id, ep] : edges_) {
        if (X.count(ep.u) && X.count(ep.v)) out.add_edge_with_id(id, ep.u, ep.v);
    }
    return out;
}

std::vector<std::set<VertexId>> MultiGraph::connected_components() const {
    std::set<VertexId> seen;
    std::vector<std::set<VertexId>> comps;
    for (const auto& [start, _] : incident_) {
        if (seen.count(start)) continue;
        std::set<VertexId> comp;
        std::vector<VertexId> stack{start};
        seen.insert(start);
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            comp.insert(v);
            for (EdgeId e : incident_.at(v)) {
                VertexId w = edges_.at(e).other(v);
                if (!seen.count(w)) {
                    seen.insert(w);
                    stack.push_back(w);
                }
            }
        }
        comps.push_back(std::move(comp));
    }
    return comps;
}

EdgeId MultiGraph::split_off(DerivationLog& log, EdgeId e1, EdgeId e2, VertexId via) {
    if (e1 == e2) throw Error(ErrorKind::SameEdge, std::to_string(e1));
    auto it1 = edges_.find(e1);
    auto it2 = edges_.find(e2);
    if (it1 == edges_.end()) throw Error(ErrorKind::UnknownEdge, std::to_string(e1));
    if (it2 == edges_.end()) throw Error(ErrorKind::UnknownEdge, std::to_string(e2));
    if (it1->second.u != via && it1->second.v != via) {
        throw Error(ErrorKind::EdgesNotAdjacentAtVia, "edge " + std::to_string(e1));
    }
    if (it2->second.u != via && it2->second.v != via) {
        throw Error(ErrorKind::EdgesNotAdjacentAtVia, "edge " + std::to_string(e2));
    }
    VertexId a = it1->second.other(via);
    VertexId b = it2->second.other(via);
    erase_edge_record(e1);
    erase_edge_record(e2);
    EdgeId produced = next_edge_id_++;
    insert_edge_record(produced, a, b);
    log.record_split(SplitOffEvent{e1, e2, via, produced, a, b});
    if (total_degree_ != 2 * edges_.size()) {
        throw Error(ErrorKind::InvariantBreach, "degree sum mismatch after split_off");
    }
    return produced;
}

void MultiGraph::split_off_complete(DerivationLog& log, VertexId v,
                                    const std::vector<std::pair<EdgeId, EdgeId>>& pairing) {
    if (!has_vertex(v)) throw Error(ErrorKind::UnknownVertex, std::to_string(v));
    if (degree(v) % 2 != 0) throw Error(ErrorKind::OddDegree, std::to_string(v));

    // Validate: each incidence of v covered exactly once. A loop is self-paired
    // (both incidences) and gets discarded rather than split.
    std::map<EdgeId, int> need;
    for (EdgeId e : incident_edges(v)) {
        need[e] = edges_.at(e).is_loop() ? 2 : 1;
    }
    std::map<EdgeId, int> got;
    for (const auto& [a, b] : pairing) {
        if (a == b) {
            if (!edges_.count(a) || !edges_.at(a).is_loop() || edges_.at(a).u != v) {
                throw Error(ErrorKind::InvalidPairing,
                            "self-pair allowed only for a loop at the split vertex");
            }
            got[a] += 2;
        } else {
            got[a] += 1;
            got[b] += 1;
        }
    }
    if (got != need) throw Error(ErrorKind::InvalidPairing, "pairing does not cover incidences");

    for (const auto& [a, b] : pairing) {
        if (a == b) {
            remove_edge_logged(log, a);
        } else {
            split_off(log, a, b, v);
        }
    }
    if (degree(v) != 0) {
        throw Error(ErrorKind::InvariantBreach, "split vertex not isolated after complete split");
    }
    remove_vertex(v);
    log.record_vertex_deleted(v);
}

void MultiGraph::remove_edge_logged(DerivationLog& log, EdgeId e) {
    remove_edge(e);
    log.record_edge_deleted(e);
}

void MultiGraph::remove_vertex_and_edges_logged(DerivationLog& log, VertexId v) {
    std::vector<EdgeId> es(incident_edges(v).begin(), incident_edges(v).end());
    for (EdgeId e : es) remove_edge_logged(log, e);
    remove_vertex(v);
    log.record_vertex_deleted(v);
}

void MultiGraph::restrict_to_logged(DerivationLog& log, const std::set<VertexId>& X) {
    std::vector<VertexId> gone;
    for (const auto& [v, _] : incident_) {
        if (!X.count(v)) gone.push_back(v);
    }
    for (VertexId v : gone) remove_vertex_and_edges_logged(log, v);
}

std::string MultiGraph::canonical_edge_list() const {
    std::vector<VertexPair> pairs;
    pairs.reserve(edges_.size());
    for (const auto& [_, ep] : edges_) pairs.push_back(ep.as_pair());
    std::sort(pairs.begin(), pairs.end());
    std::ostringstream os;
    for (const auto& [u, v] : pairs) os << (u + 1) << ' ' << (v + 1) << '\n';
    return os.str();
}

void MultiGraph::check_consistency() const {
    std::size_t total = 0;
    for (const auto& [v, inc] : incident_) {
        std::size_t d = 0;
        for (EdgeId e : inc) {
            Endpoints ep = edges_.at(e);
            if (ep.u != v && ep.v != v) {
                throw Error(ErrorKind::InvariantBreach, "incidence list corrupt");
            }
            d += ep.is_loop() ? 2 : 1;
        }
        if (d != degree_.at(v)) {
            throw Error(ErrorKind::InvariantBreach, "degree mismatch at " + std::to_string(v));
        }
        total += d;
    }
    if (total != 2 * edges_.size() || total != total_degree_) {
        throw Error(ErrorKind::InvariantBreach, "degree sum != 2 * edge count");
    }
    std::size_t loops = 0, extra = 0;
    std::map<VertexPair, std::size_t> mult;
    for (const auto& [_, ep] : edges_) {
        if (ep.is_loop()) ++loops;
        ++mult[ep.as_pair()];
    }
    for (const auto& [_, m] : mult) extra += m - 1;
    if (loops != loop_count_ || extra != parallel_extra_) {
        throw Error(ErrorKind::InvariantBreach, "simplicity counters corrupt");
    }
}

MultiGraph replay(const MultiGraph& root, const DerivationLog& log) {
    MultiGraph g = root;
    DerivationLog scratch;
    for (const auto& ev : log.events()) {
        if (const auto* s = std::get_if<SplitOffEvent>(&ev)) {
            EdgeId produced = g.split_off(scratch, s->consumed1, s->consumed2, s->via);
            if (produced != s->produced) {
                // Replay must reproduce ids exactly; adjust is not allowed.
                throw Error(ErrorKind::InvariantBreach,
                            "replay produced edge id " + std::to_string(produced) +
                                ", log says " + std::to_string(s->produced));
            }
        } else if (const auto* d = std::get_if<EdgeDeletedEvent>(&ev)) {
            g.remove_edge(d->edge);
        } else {
            g.remove_vertex(std::get<VertexDeletedEvent>(ev).vertex);
        }
    }
    return g;
}

MultiGraph complete_graph(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    }
    return g;
}

MultiGraph cycle_graph(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex();
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

MultiGraph path_graph(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex();
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

MultiGraph complete_bipartite(int a, int b) {
    MultiGraph g;
    for (int i = 0; i < a + b; ++i) g.add_vertex();
    for (int i = 0; i < a; ++i) {
        for (int j = 0; j < b; ++j) g.add_edge(i, a + j);
    }
    return g;
}

MultiGraph complete_multipartite_graph(const std::vector<int>& parts) {
    MultiGraph g;
    int n = 0;
    for (int p : parts) n += p;
    for (int i = 0; i < n; ++i) g.add_vertex();
    int offset_i = 0;
    for (std::size_t pi = 0; pi < parts.size(); ++pi) {
        int offset_j = offset_i + parts[pi];
        for (std::size_t pj = pi + 1; pj < parts.size(); ++pj) {
            for (int i = 0; i < parts[pi]; ++i) {
                for (int j = 0; j < parts[pj]; ++j) {
                    g.add_edge(offset_i + i, offset_j + j);
                }
            }
            offset_j += parts[pj];
        }
        offset_i += parts[pi];
    }
    return g;
}

}  // namespace immersion
