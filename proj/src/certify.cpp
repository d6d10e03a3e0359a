#include "immersion/certify.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "immersion/digest.hpp"

namespace immersion {

const char* verify_clause_name(VerifyClause clause) {
    switch (clause) {
        case VerifyClause::None: return "none";
        case VerifyClause::BranchInjective: return "a:branch-injective";
        case VerifyClause::StepNotEdge: return "b:step-not-an-edge";
        case VerifyClause::EdgesNotDisjoint: return "c:edges-not-disjoint";
        case VerifyClause::InternalBranchVertex: return "d:internal-branch-vertex";
        case VerifyClause::PairCoverage: return "e:pair-coverage";
        case VerifyClause::PathNotSimple: return "path-not-simple";
    }
    return "unknown";
}

EdgeUsage edge_usage(const ImmersionCertificate& cert) {
    EdgeUsage usage;
    for (const auto& [_, path] : cert.paths) {
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            ++usage[ordered_pair(path[i], path[i + 1])];
        }
    }
    return usage;
}

std::string graph_digest(const MultiGraph& g) { return sha256_hex(g.canonical_edge_list()); }

namespace {

Verdict reject(VerifyClause clause, std::string detail,
               std::optional<VertexPair> pair = std::nullopt,
               std::optional<VertexId> vertex = std::nullopt) {
    Verdict v;
    v.accepted = false;
    v.clause = clause;
    v.detail = std::move(detail);
    v.offending_pair = pair;
    v.offending_vertex = vertex;
    return v;
}

std::string pair_text(VertexPair p) {
    return "{" + std::to_string(p.first) + "," + std::to_string(p.second) + "}";
}

}  // namespace

Verdict verify_strong_immersion(const MultiGraph& host, const ImmersionCertificate& cert,
                                bool strong) {
    if (!cert.host_digest.empty() && cert.host_digest != graph_digest(host)) {
        throw Error(ErrorKind::DigestMismatch, "certificate was issued for a different host");
    }

    // (a) branch injective, all branch vertices in the host
    if (static_cast<int>(cert.branch.size()) != cert.t) {
        return reject(VerifyClause::BranchInjective,
                      "branch size " + std::to_string(cert.branch.size()) + " != t");
    }
    std::unordered_set<VertexId> branch_set;
    for (VertexId v : cert.branch) {
        if (!host.has_vertex(v)) {
            return reject(VerifyClause::BranchInjective,
                          "branch vertex " + std::to_string(v) + " not in host", std::nullopt, v);
        }
        if (!branch_set.insert(v).second) {
            return reject(VerifyClause::BranchInjective,
                          "branch vertex " + std::to_string(v) + " repeated", std::nullopt, v);
        }
    }

    // (e) all pairs present, endpoints match the branch map
    for (int i = 0; i < cert.t; ++i) {
        for (int j = i + 1; j < cert.t; ++j) {
            auto it = cert.paths.find({i, j});
            if (it == cert.paths.end()) {
                return reject(VerifyClause::PairCoverage,
                              "no path for pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
            const auto& path = it->second;
            if (path.size() < 2 || path.front() != cert.branch[i] || path.back() != cert.branch[j]) {
                return reject(VerifyClause::PairCoverage,
                              "path endpoints do not match branch pair (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
            }
        }
    }
    for (const auto& [key, _] : cert.paths) {
        if (key.first < 0 || key.second >= cert.t || key.first >= key.second) {
            return reject(VerifyClause::PairCoverage, "stray pair key in certificate");
        }
    }

    for (const auto& [key, path] : cert.paths) {
        // vertex-simplicity
        std::unordered_set<VertexId> seen;
        for (VertexId v : path) {
            if (!seen.insert(v).second) {
                return reject(VerifyClause::PathNotSimple,
                              "path for " + pair_text({cert.branch[key.first], cert.branch[key.second]}) +
                                  " repeats vertex " + std::to_string(v),
                              std::nullopt, v);
            }
        }
        // (b) each step is a host edge
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            if (!host.has_vertex(path[i]) || !host.has_vertex(path[i + 1]) ||
                !host.adjacent(path[i], path[i + 1])) {
                VertexPair p = ordered_pair(path[i], path[i + 1]);
                return reject(VerifyClause::StepNotEdge, "step " + pair_text(p) + " is not a host edge",
                              p);
            }
        }
        // (d) internal vertices avoid branch image
        if (strong) {
            for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                if (branch_set.count(path[i])) {
                    return reject(VerifyClause::InternalBranchVertex,
                                  "internal vertex " + std::to_string(path[i]) + " is a branch vertex",
                                  std::nullopt, path[i]);
                }
            }
        }
    }

    // (c) pairwise edge-disjoint: total usage within multiplicity
    for (const auto& [pair, count] : edge_usage(cert)) {
        if (count > host.multiplicity(pair.first, pair.second)) {
            return reject(VerifyClause::EdgesNotDisjoint,
                          "pair " + pair_text(pair) + " used " + std::to_string(count) +
                              " times, multiplicity " +
                              std::to_string(host.multiplicity(pair.first, pair.second)),
                          pair);
        }
    }

    Verdict ok;
    ok.accepted = true;
    return ok;
}

ImmersionCertificate make_certificate(const MultiGraph& host, std::vector<VertexId> branch,
                                      std::map<BranchPair, std::vector<VertexId>> paths) {
    ImmersionCertificate cert;
    cert.t = static_cast<int>(branch.size());
    cert.branch = std::move(branch);
    cert.paths = std::move(paths);
    cert.host_digest = graph_digest(host);
    return cert;
}

namespace {

// Walk from one endpoint of `e` to the other, as recorded by the log.
void unfold_into(const MultiGraph& root, const DerivationLog& log, EdgeId e,
                 std::vector<VertexId>& out) {
    const SplitOffEvent* ev = log.producer_of(e);
    if (ev == nullptr) {
        Endpoints ep = root.endpoints(e);  // throws UnknownEdge for bogus ids
        if (out.empty()) out.push_back(ep.u);
        // orient so the walk continues from out.back()
        if (out.back() == ep.u) {
            out.push_back(ep.v);
        } else {
            out.push_back(ep.u);
        }
        return;
    }
    // produced edge runs produced_u -> via -> produced_v
    bool forward;
    if (out.empty()) {
        out.push_back(ev->produced_u);
        forward = true;
    } else {
        forward = (out.back() == ev->produced_u);
    }
    if (forward) {
        unfold_into(root, log, ev->consumed1, out);
        unfold_into(root, log, ev->consumed2, out);
    } else {
        unfold_into(root, log, ev->consumed2, out);
        unfold_into(root, log, ev->consumed1, out);
    }
}

}  // namespace

std::vector<VertexId> unfold_edge(const MultiGraph& root, const DerivationLog& log, EdgeId e) {
    std::vector<VertexId> walk;
    unfold_into(root, log, e, walk);
    return walk;
}

std::vector<VertexId> shortcut_walk(const std::vector<VertexId>& walk) {
    std::vector<VertexId> out;
    std::unordered_map<VertexId, std::size_t> position;
    for (VertexId v : walk) {
        auto it = position.find(v);
        if (it != position.end()) {
            for (std::size_t k = it->second + 1; k < out.size(); ++k) position.erase(out[k]);
            out.resize(it->second + 1);
        } else {
            position[v] = out.size();
            out.push_back(v);
        }
    }
    return out;
}

ImmersionCertificate lift_certificate(const MultiGraph& root, const DerivationLog& log,
                                      const ImmersionCertificate& derived_cert) {
    MultiGraph derived = replay(root, log);
    Verdict pre = verify_strong_immersion(derived, derived_cert);
    if (!pre.accepted) {
        throw Error(ErrorKind::PreconditionViolated,
                    "derived certificate does not verify: " + pre.detail);
    }

    std::unordered_set<VertexId> branch_set(derived_cert.branch.begin(), derived_cert.branch.end());
    std::map<VertexPair, std::size_t> copies_taken;

    std::map<BranchPair, std::vector<VertexId>> lifted;
    for (const auto& [key, path] : derived_cert.paths) {
        std::vector<VertexId> walk;
        walk.push_back(path.front());
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            VertexPair p = ordered_pair(path[i], path[i + 1]);
            std::vector<EdgeId> copies = derived.edges_between(path[i], path[i + 1]);
            std::size_t& taken = copies_taken[p];
            if (taken >= copies.size()) {
                throw Error(ErrorKind::InvariantBreach, "ran out of parallel copies while lifting");
            }
            EdgeId edge = copies[taken++];
            std::vector<VertexId> step = unfold_edge(root, log, edge);
            if (step.front() != path[i]) std::reverse(step.begin(), step.end());
            if (step.front() != path[i] || step.back() != path[i + 1]) {
                throw Error(ErrorKind::InvariantBreach, "unfolded walk endpoints mismatch");
            }
            walk.insert(walk.end(), step.begin() + 1, step.end());
        }
        std::vector<VertexId> simple = shortcut_walk(walk);
        for (std::size_t i = 1; i + 1 < simple.size(); ++i) {
            if (branch_set.count(simple[i])) {
                throw Error(ErrorKind::LiftViolation,
                            "lifted path for pair (" + std::to_string(key.first) + "," +
                                std::to_string(key.second) + ") passes through branch vertex " +
                                std::to_string(simple[i]));
            }
        }
        lifted[key] = std::move(simple);
    }

    return make_certificate(root, derived_cert.branch, std::move(lifted));
}

}  // namespace immersion
