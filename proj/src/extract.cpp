#include "immersion/extract.hpp"

#include <algorithm>

#include "immersion/dense.hpp"
#include "immersion/matchings.hpp"

namespace immersion {

void check_state(const TDState& state) {
    if (state.t < 1 || state.d < 11 * state.t) {
        throw Error(ErrorKind::InvariantBreach, "state parameters violate t >= 1, d >= 11t");
    }
    if (!state.g.is_simple() || !state.g.is_eulerian() ||
        state.g.deficiency_sum(state.d) >= state.d) {
        throw Error(ErrorKind::InvariantBreach, "state graph not Eulerian with small deficiency");
    }
    if (state.A.empty()) throw Error(ErrorKind::InvariantBreach, "state has empty A");
    std::set<VertexId> A_set(state.A.begin(), state.A.end());
    if (A_set.size() != state.A.size()) {
        throw Error(ErrorKind::InvariantBreach, "A ordering repeats a vertex");
    }
    for (VertexId a : state.A) {
        if (!state.g.has_vertex(a)) throw Error(ErrorKind::InvariantBreach, "A vertex missing");
        if (state.B.count(a)) throw Error(ErrorKind::InvariantBreach, "A and B intersect");
    }
    for (VertexId b : state.B) {
        if (!state.g.has_vertex(b)) throw Error(ErrorKind::InvariantBreach, "B vertex missing");
    }
    // (i)
    if (state.B.size() + state.A.size() < static_cast<std::size_t>(state.d) ||
        state.B.size() > static_cast<std::size_t>(state.d)) {
        throw Error(ErrorKind::InvariantBreach, "state condition (i): d-|A| <= |B| <= d");
    }
    // (ii)
    for (std::size_t i = 0; i < state.A.size(); ++i) {
        VertexId a = state.A[i];
        std::size_t non_adjacent = 0;
        for (VertexId b : state.B) {
            if (!state.g.adjacent(a, b)) ++non_adjacent;
        }
        if (non_adjacent > state.A.size() + 2 * (i + 1)) {
            throw Error(ErrorKind::InvariantBreach,
                        "state condition (ii) fails at position " + std::to_string(i + 1));
        }
    }
}

TDState initial_state(const MultiGraph& g, int t, int d) {
    if (t < 1 || d < 11 * t) throw Error(ErrorKind::PreconditionViolated, "need t >= 1, d >= 11t");
    if (!g.is_eulerian() || g.deficiency_sum(d) >= d) {
        throw Error(ErrorKind::PreconditionViolated, "graph not Eulerian with deficiency < d");
    }
    TDState st;
    st.t = t;
    st.d = d;
    st.g = g;
    bool found = false;
    for (VertexId v : g.vertices()) {
        if (g.degree(v) >= static_cast<std::size_t>(d)) {
            st.A = {v};
            found = true;
            break;
        }
    }
    if (!found) {
        throw Error(ErrorKind::NoHighDegreeVertex,
                    "no vertex of degree >= d despite deficiency < d");
    }
    for (VertexId b : g.neighbors(st.A[0])) {
        st.B.insert(b);
        if (st.B.size() == static_cast<std::size_t>(d)) break;
    }
    check_state(st);
    return st;
}

namespace detail {

AttemptEngine::AttemptEngine(const MultiGraph& g, std::vector<VertexId> A, int t, int d)
    : work_(g), A_(std::move(A)), t_(t), d_(d) {
    A_live_.insert(A_.begin(), A_.end());
    for (VertexId v : work_.vertices()) degree0_[v] = work_.degree(v);
}

void AttemptEngine::inject_context(std::set<VertexId> Q, std::set<VertexId> R) {
    Q_ = std::move(Q);
    R_ = std::move(R);
}

VertexId AttemptEngine::current_target() const {
    if (finished()) throw Error(ErrorKind::BadParams, "attempt already finished");
    return A_[A_.size() - 1 - eliminated_];
}

AuxGraph AttemptEngine::build_aux_graph(VertexId a) const {
    AuxGraph aux;
    for (EdgeId e : work_.incident_edges(a)) {
        Endpoints ep = work_.endpoints(e);
        if (ep.is_loop()) continue;
        VertexId u = ep.other(a);
        if (A_live_.count(u)) continue;
        int idx = static_cast<int>(aux.edge_of.size());
        aux.H.add_vertex(static_cast<VertexId>(idx));
        aux.edge_of.push_back(e);
        aux.endpoint_of.push_back(u);
        bool sec = false;
        if (R_.count(u) && work_.multiplicity(a, u) == 2) {
            // the larger id of the double edge is the secondary copy
            std::vector<EdgeId> copies = work_.edges_between(a, u);
            sec = (e == copies.back());
        }
        aux.secondary.push_back(sec);
    }
    // e1 = au, e2 = av adjacent iff uv is an edge, or u,v sit in R and one of
    // the copies is secondary (covers the parallel case u = v)
    for (std::size_t i = 0; i < aux.edge_of.size(); ++i) {
        for (std::size_t j = i + 1; j < aux.edge_of.size(); ++j) {
            VertexId u = aux.endpoint_of[i], v = aux.endpoint_of[j];
            bool adj = (u != v && work_.adjacent(u, v)) ||
                       (R_.count(u) && R_.count(v) && (aux.secondary[i] || aux.secondary[j]));
            if (adj) {
                aux.H.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j));
            }
        }
    }
    return aux;
}

AttemptEngine::Outcome AttemptEngine::eliminate_next() {
    VertexId a = current_target();
    if (work_.degree(a) % 2 != 0) {
        throw Error(ErrorKind::InvariantBreach, "odd degree inside an Eulerian attempt");
    }
    last_aux_ = build_aux_graph(a);
    const AuxGraph& aux = last_aux_;
    MultiGraph Hbar = aux.H.complement();
    MatchStructure ms = match_structure(Hbar);
    if (ms.kind == MatchStructure::Kind::Cover) {
        return Outcome::Cover;
    }

    Matching M;
    int loose = -1;  // H index of e in the hypomatchable case
    if (ms.kind == MatchStructure::Kind::PerfectMatching) {
        M = ms.perfect;
    } else {
        // lowest-edge-id H vertex whose endpoint avoids Q and R
        for (std::size_t i = 0; i < aux.edge_of.size(); ++i) {
            VertexId u = aux.endpoint_of[i];
            if (!Q_.count(u) && !R_.count(u)) {
                if (loose == -1 || aux.edge_of[i] < aux.edge_of[loose]) {
                    loose = static_cast<int>(i);
                }
            }
        }
        if (loose == -1) {
            throw Error(ErrorKind::InvariantBreach, "no loose edge outside Q and R");
        }
        M = hypomatchable_witness(Hbar, static_cast<VertexId>(loose));
    }

    // realize the near-matching M' and split along it
    std::vector<std::pair<EdgeId, EdgeId>> split_pairs;
    std::map<VertexId, int> m_degree;
    for (const auto& [x, y] : M.edges) {
        EdgeId ex = aux.edge_of[x];
        EdgeId ey = aux.edge_of[y];
        VertexId u = aux.endpoint_of[x], v = aux.endpoint_of[y];
        if (u == v || work_.adjacent(u, v)) {
            throw Error(ErrorKind::InvariantBreach, "near-matching edge already present");
        }
        split_pairs.push_back({std::min(ex, ey), std::max(ex, ey)});
        ++m_degree[u];
        ++m_degree[v];
    }
    std::set<VertexId> centers;
    for (const auto& [v, deg] : m_degree) {
        if (deg > 2) throw Error(ErrorKind::InvariantBreach, "M' exceeds near-matching degree");
        if (deg == 2) {
            if (!R_.count(v)) {
                throw Error(ErrorKind::InvariantBreach, "near-matching center outside R");
            }
            centers.insert(v);
        }
    }
    std::sort(split_pairs.begin(), split_pairs.end());
    for (const auto& [e1, e2] : split_pairs) work_.split_off(log_, e1, e2, a);

    // the rest (edges into A, plus the loose edge) pairs up in id order;
    // loops at a are discarded
    for (EdgeId e : work_.loop_edges()) {
        if (work_.endpoints(e).u == a) work_.remove_edge_logged(log_, e);
    }
    std::vector<EdgeId> rest(work_.incident_edges(a).begin(), work_.incident_edges(a).end());
    if (rest.size() % 2 != 0) {
        throw Error(ErrorKind::InvariantBreach, "odd number of leftover incidences");
    }
    for (std::size_t i = 0; i + 1 < rest.size(); i += 2) {
        work_.split_off(log_, rest[i], rest[i + 1], a);
    }
    if (work_.degree(a) != 0) {
        throw Error(ErrorKind::InvariantBreach, "target not isolated after elimination");
    }
    work_.remove_vertex(a);
    log_.record_vertex_deleted(a);
    A_live_.erase(a);
    ++eliminated_;

    Q_.insert(centers.begin(), centers.end());
    check_invariants();
    return Outcome::Eliminated;
}

void AttemptEngine::check_invariants() {
    // invariant 2: all surviving degrees unchanged
    for (VertexId v : work_.vertices()) {
        if (work_.degree(v) != degree0_.at(v)) {
            throw Error(ErrorKind::InvariantBreach,
                        "degree of " + std::to_string(v) + " drifted during the attempt");
        }
    }
    // invariant 3: loops only inside A; parallels both in A, or one end in A
    // with multiplicity exactly 2; recompute R from the graph
    std::set<VertexId> R_now;
    for (EdgeId e : work_.loop_edges()) {
        if (!A_live_.count(work_.endpoints(e).u)) {
            throw Error(ErrorKind::InvariantBreach, "loop outside A");
        }
    }
    std::map<VertexId, int> doubles_at;
    for (const auto& [pair, mult] : work_.parallel_pairs()) {
        bool u_in = A_live_.count(pair.first) != 0;
        bool v_in = A_live_.count(pair.second) != 0;
        if (u_in && v_in) continue;
        if (!u_in && !v_in) {
            throw Error(ErrorKind::InvariantBreach, "parallel edge with no end in A");
        }
        if (mult != 2) {
            throw Error(ErrorKind::InvariantBreach, "A-incident parallel edge of multiplicity > 2");
        }
        VertexId outside = u_in ? pair.second : pair.first;
        R_now.insert(outside);
        if (++doubles_at[outside] > 1) {
            throw Error(ErrorKind::InvariantBreach,
                        "vertex " + std::to_string(outside) + " carries two double edges");
        }
    }
    R_ = R_now;
    for (VertexId q : Q_) {
        if (R_now.count(q)) {
            throw Error(ErrorKind::InvariantBreach, "Q and R intersect");
        }
    }
    if (Q_.size() + R_now.size() > eliminated_) {
        throw Error(ErrorKind::InvariantBreach, "|Q| + |R| exceeds the step counter");
    }
}

}  // namespace detail

namespace {

void emit(const TraceSink& trace, TraceRecord rec) {
    if (trace) trace(rec);
}

StepResult cover_to_result(detail::AttemptEngine& engine, const TDState& state,
                           const TraceSink& trace) {
    const detail::AuxGraph& aux = engine.last_aux();
    VertexId a = engine.current_target();
    int tau = state.t + static_cast<int>(engine.R().size());

    auto outcome = small_cover_or_witness(aux.H, tau);
    if (std::holds_alternative<MultipartiteWitness>(outcome)) {
        // strip secondary copies; what is left maps injectively to a complete
        // multipartite subgraph of the working graph with min degree >= t
        std::vector<std::set<VertexId>> parts;
        for (const auto& part : std::get<MultipartiteWitness>(outcome).parts) {
            std::set<VertexId> mapped;
            for (VertexId idx : part) {
                if (aux.secondary[idx]) continue;
                if (!mapped.insert(aux.endpoint_of[idx]).second) {
                    throw Error(ErrorKind::InvariantBreach,
                                "duplicate endpoint after stripping secondaries");
                }
            }
            if (!mapped.empty()) parts.push_back(std::move(mapped));
        }
        StepResult res;
        res.kind = StepResult::Kind::Immersion;
        try {
            res.certificate =
                immerse_complete_multipartite(engine.work(), engine.log(), parts, state.t);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::PreconditionViolated) {
                throw Error(ErrorKind::InvariantBreach,
                            "stripped witness lost the multipartite structure: " +
                                std::string(e.what()));
            }
            throw;
        }
        res.graph = std::move(engine.work());
        res.log = std::move(engine.log());
        emit(trace, {"immersion", state.A.size(), state.B.size(), res.graph.num_vertices(),
                     engine.Q().size(), engine.R().size()});
        return res;
    }

    const SmallCover& sc = std::get<SmallCover>(outcome);
    std::set<VertexId> W_prime, T_prime;
    for (VertexId idx : sc.W) W_prime.insert(aux.endpoint_of[idx]);
    for (VertexId idx : sc.T) T_prime.insert(aux.endpoint_of[idx]);
    if (W_prime.empty()) throw Error(ErrorKind::InvariantBreach, "empty W'");

    std::set<VertexId> R_pp;  // R'' = R \ W'
    for (VertexId r : engine.R()) {
        if (!W_prime.count(r)) R_pp.insert(r);
    }

    if (W_prime.size() >= static_cast<std::size_t>(state.t)) {
        // K_{t,t} between W' and the unobstructed B-neighborhood of a
        std::set<VertexId> XB;
        const MultiGraph& w = engine.work();
        for (VertexId b : state.B) {
            if (w.has_vertex(b) && w.adjacent(a, b) && !W_prime.count(b) && !T_prime.count(b) &&
                !R_pp.count(b)) {
                XB.insert(b);
            }
        }
        if (XB.size() < static_cast<std::size_t>(state.t)) {
            throw Error(ErrorKind::InvariantBreach, "K_{t,t} partner side too small");
        }
        StepResult res;
        res.kind = StepResult::Kind::Immersion;
        try {
            res.certificate =
                immerse_via_common_neighbors(engine.work(), engine.log(), W_prime, XB, state.t);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::PreconditionViolated) {
                throw Error(ErrorKind::InvariantBreach,
                            "cover side lost the K_{t,t}: " + std::string(e.what()));
            }
            throw;
        }
        res.graph = std::move(engine.work());
        res.log = std::move(engine.log());
        emit(trace, {"immersion", state.A.size(), state.B.size(), res.graph.num_vertices(),
                     engine.Q().size(), engine.R().size()});
        return res;
    }

    // Grow: the attempt's splits are discarded; the new state lives on the
    // original graph
    StepResult res;
    res.kind = StepResult::Kind::Grow;
    res.grow_A = state.A;
    for (VertexId v : W_prime) res.grow_A.push_back(v);
    res.grow_B = state.B;
    for (VertexId v : W_prime) res.grow_B.erase(v);
    if (res.grow_A.size() >= state.A.size() + static_cast<std::size_t>(state.t)) {
        throw Error(ErrorKind::InvariantBreach, "grow step gained t or more vertices");
    }
    TDState next{state.t, state.d, state.g, res.grow_A, res.grow_B};
    check_state(next);
    emit(trace, {"grow", res.grow_A.size(), res.grow_B.size(), state.g.num_vertices(),
                 engine.Q().size(), engine.R().size()});
    return res;
}

}  // namespace

StepResult attempt_split(const TDState& state, const TraceSink& trace) {
    check_state(state);
    if (state.A.size() > static_cast<std::size_t>(state.t) - 1) {
        throw Error(ErrorKind::PreconditionViolated, "attempt_split requires |A| <= t-1");
    }
    detail::AttemptEngine engine(state.g, state.A, state.t, state.d);
    while (!engine.finished()) {
        if (engine.eliminate_next() == detail::AttemptEngine::Outcome::Cover) {
            return cover_to_result(engine, state, trace);
        }
    }
    StepResult res;
    res.kind = StepResult::Kind::Split;
    res.graph = std::move(engine.work());
    res.log = std::move(engine.log());
    // splittable-set contract
    std::set<VertexId> A_set(state.A.begin(), state.A.end());
    for (VertexId v : state.g.vertices()) {
        bool gone = A_set.count(v) != 0;
        if (gone == res.graph.has_vertex(v)) {
            throw Error(ErrorKind::InvariantBreach, "split graph vertex set is not V minus A");
        }
        if (!gone && res.graph.degree(v) != state.g.degree(v)) {
            throw Error(ErrorKind::InvariantBreach, "split graph changed a surviving degree");
        }
    }
    if (!res.graph.is_simple()) {
        throw Error(ErrorKind::InvariantBreach, "split graph kept a loop or parallel edge");
    }
    emit(trace, {"split", state.A.size(), state.B.size(), res.graph.num_vertices(),
                 engine.Q().size(), engine.R().size()});
    return res;
}

StepResult find_splittable_or_immersion(const TDState& state0, const TraceSink& trace) {
    TDState st = state0;
    for (int round = 0; round <= 2 * st.t + 2; ++round) {
        if (st.A.size() >= static_cast<std::size_t>(st.t)) {
            // the state inequalities hand the prefix of A to the dense finish
            std::set<VertexId> prefix(st.A.begin(), st.A.begin() + st.t);
            StepResult res;
            res.kind = StepResult::Kind::Immersion;
            res.graph = st.g;
            try {
                res.certificate =
                    immerse_via_common_neighbors(res.graph, res.log, prefix, st.B, st.t);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::PreconditionViolated) {
                    throw Error(ErrorKind::InvariantBreach,
                                "dense finish preconditions failed: " + std::string(e.what()));
                }
                throw;
            }
            emit(trace, {"dense-finish", st.A.size(), st.B.size(), res.graph.num_vertices(), 0, 0});
            return res;
        }
        StepResult r = attempt_split(st, trace);
        if (r.kind != StepResult::Kind::Grow) return r;
        st.A = r.grow_A;
        st.B = r.grow_B;
    }
    throw Error(ErrorKind::InvariantBreach, "grow loop failed to terminate");
}

ImmersionCertificate extract_from_eulerian(const MultiGraph& g, int t, int d,
                                           const TraceSink& trace) {
    if (t < 1 || d < 11 * t) throw Error(ErrorKind::PreconditionViolated, "need t >= 1, d >= 11t");
    if (!g.is_simple()) throw Error(ErrorKind::NotSimple, "input must be simple");
    if (!g.is_eulerian() || g.deficiency_sum(d) >= d) {
        throw Error(ErrorKind::PreconditionViolated, "input not Eulerian with deficiency < d");
    }

    MultiGraph working = g;
    DerivationLog main_log;
    std::size_t guard = g.num_vertices() + 2;
    for (std::size_t round = 0; round < guard; ++round) {
        TDState st = initial_state(working, t, d);
        emit(trace, {"state", st.A.size(), st.B.size(), working.num_vertices(), 0, 0});
        StepResult r = find_splittable_or_immersion(st, trace);
        if (r.kind == StepResult::Kind::Split) {
            if (r.graph.num_vertices() >= working.num_vertices()) {
                throw Error(ErrorKind::InvariantBreach, "split did not shrink the graph");
            }
            working = std::move(r.graph);
            main_log.append(r.log);
            continue;
        }
        main_log.append(r.log);
        ImmersionCertificate lifted = lift_certificate(g, main_log, r.certificate);
        Verdict verdict = verify_strong_immersion(g, lifted);
        if (!verdict.accepted) {
            throw Error(ErrorKind::InvariantBreach,
                        "lifted certificate rejected: " + verdict.detail);
        }
        return lifted;
    }
    throw Error(ErrorKind::InvariantBreach, "elimination loop failed to terminate");
}

ImmersionCertificate extract(const MultiGraph& g, int t, const ExtractOptions& options,
                             const TraceSink& trace, ExtractReport* report) {
    if (t < 1) throw Error(ErrorKind::BadParams, "t must be positive");
    if (!g.is_simple()) throw Error(ErrorKind::NotSimple, "input must be simple");
    for (VertexId v : g.vertices()) {
        if (g.degree(v) < static_cast<std::size_t>(11 * t + 7)) {
            throw Error(ErrorKind::DegreeTooLow,
                        "vertex " + std::to_string(v) + " has degree " +
                            std::to_string(g.degree(v)) + " < " + std::to_string(11 * t + 7));
        }
    }
    if (t == 1) {
        ImmersionCertificate cert = make_certificate(g, {g.lowest_vertex()}, {});
        if (!verify_strong_immersion(g, cert).accepted) {
            throw Error(ErrorKind::InvariantBreach, "trivial certificate rejected");
        }
        if (report) report->d = 0;
        return cert;
    }

    int d = (11 * t) % 2 == 0 ? 11 * t : 11 * t + 1;
    if (report) report->d = d;

    TraceSink counting = trace;
    int splits = 0, grows = 0;
    TraceSink wrapped = [&](const TraceRecord& rec) {
        if (rec.kind == "split") ++splits;
        if (rec.kind == "grow") ++grows;
        if (counting) counting(rec);
    };

    EulerianizeReport prep_report;
    PrepOutcome prep =
        eulerianize(g, d, t, options.seed, &prep_report, options.allow_degree_six);
    ImmersionCertificate result;
    if (prep.immersion_found) {
        result = lift_certificate(g, prep.log, prep.certificate);
    } else {
        ImmersionCertificate inner = extract_from_eulerian(prep.graph, t, d, wrapped);
        // compose: rebase the certificate found on the prepared graph
        result = lift_certificate(g, prep.log, inner);
    }
    Verdict verdict = verify_strong_immersion(g, result);
    if (!verdict.accepted) {
        throw Error(ErrorKind::InvariantBreach, "final certificate rejected: " + verdict.detail);
    }
    if (report) {
        report->split_rounds = splits;
        report->grow_steps = grows;
        report->prep = prep_report;
    }
    return result;
}

}  // namespace immersion
