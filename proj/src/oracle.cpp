#include "immersion/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace immersion {

std::vector<std::set<VertexId>> twin_classes(const MultiGraph& g) {
    std::vector<VertexId> vs = g.vertices();
    std::map<std::set<VertexId>, std::set<VertexId>> open_groups;
    for (VertexId v : vs) {
        std::vector<VertexId> nb = g.neighbors(v);
        open_groups[std::set<VertexId>(nb.begin(), nb.end())].insert(v);
    }
    std::set<VertexId> placed;
    std::vector<std::set<VertexId>> classes;
    for (const auto& [_, grp] : open_groups) {
        if (grp.size() >= 2) {
            classes.push_back(grp);
            placed.insert(grp.begin(), grp.end());
        }
    }
    // merge leftover vertices by closed neighborhoods (true twins)
    std::map<std::set<VertexId>, std::set<VertexId>> closed_groups;
    for (VertexId v : vs) {
        if (placed.count(v)) continue;
        std::vector<VertexId> nb = g.neighbors(v);
        std::set<VertexId> key(nb.begin(), nb.end());
        key.insert(v);
        closed_groups[key].insert(v);
    }
    for (const auto& [_, grp] : closed_groups) classes.push_back(grp);
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
    return classes;
}

namespace {

struct CompactGraph {
    int n = 0;
    std::vector<VertexId> ids;
    std::vector<std::array<int, 2>> edges;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, edge index)

    explicit CompactGraph(const MultiGraph& g) {
        ids = g.vertices();
        n = static_cast<int>(ids.size());
        std::map<VertexId, int> index;
        for (int i = 0; i < n; ++i) index[ids[i]] = i;
        adj.assign(n, {});
        for (const auto& [_, ep] : g.edges()) {
            if (ep.is_loop()) continue;
            int u = index.at(ep.u), v = index.at(ep.v);
            int e = static_cast<int>(edges.size());
            edges.push_back({u, v});
            adj[u].push_back({v, e});
            adj[v].push_back({u, e});
        }
        for (auto& row : adj) std::sort(row.begin(), row.end());
    }
};

constexpr int kInf = 1 << 28;

// shortest x..target distance over paths internally avoiding `blocked`
// (endpoints excepted)
std::vector<int> distance_to(const CompactGraph& cg, int target,
                             const std::vector<char>& blocked_internal) {
    std::vector<int> dist(cg.n, kInf);
    dist[target] = 0;
    std::deque<int> q{target};
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        if (x != target && blocked_internal[x]) continue;  // cannot pass through
        for (auto [y, e] : cg.adj[x]) {
            (void)e;
            if (dist[y] > dist[x] + 1) {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    return dist;
}

struct PackSearch {
    const CompactGraph& cg;
    bool strong;
    std::vector<int> branch;
    std::vector<char> in_branch;
    std::vector<std::pair<int, int>> pairs;  // branch indices, ordered hardest first
    std::vector<int> lower_bound;            // per pair
    std::vector<std::vector<int>> dist_to;   // per branch index
    std::vector<char> edge_used;
    std::vector<int> residual_deg;
    std::vector<int> needs;  // remaining pair-endpoints per vertex
    std::vector<std::vector<int>> chosen_paths;

    std::atomic<std::uint64_t>* nodes;
    std::uint64_t node_cap;
    std::atomic<bool>* stop;
    std::chrono::steady_clock::time_point deadline;
    bool use_deadline;
    bool out_of_budget = false;

    bool tick() {
        std::uint64_t seen = nodes->fetch_add(1, std::memory_order_relaxed) + 1;
        if (seen > node_cap) {
            out_of_budget = true;
            stop->store(true, std::memory_order_relaxed);
            return false;
        }
        if (use_deadline && (seen & 0xfff) == 0 &&
            std::chrono::steady_clock::now() > deadline) {
            out_of_budget = true;
            stop->store(true, std::memory_order_relaxed);
            return false;
        }
        return !stop->load(std::memory_order_relaxed);
    }

    bool degree_prune_ok() const {
        for (int b : branch) {
            if (needs[b] > residual_deg[b]) return false;
        }
        return true;
    }

    // enumerate simple u..v paths of exact length len over free edges
    bool enum_paths(int pair_idx, int slack_left, int len, std::vector<int>& path,
                    std::vector<char>& visited) {
        if (!tick()) return false;
        int x = path.back();
        int target = branch[pairs[pair_idx].second];
        const auto& dist = dist_to[pairs[pair_idx].second];
        int remaining = len - static_cast<int>(path.size()) + 1;
        for (auto [y, e] : cg.adj[x]) {
            if (edge_used[e] || visited[y]) continue;
            if (y == target) {
                if (remaining != 1) continue;
            } else {
                if (remaining <= 1) continue;
                if (strong && in_branch[y]) continue;
                if (dist[y] > remaining - 1) continue;
            }
            edge_used[e] = 1;
            residual_deg[x]--;
            residual_deg[y]--;
            visited[y] = 1;
            path.push_back(y);
            bool done;
            if (y == target) {
                chosen_paths[pair_idx] = path;
                done = degree_prune_ok() && solve(pair_idx + 1, slack_left);
            } else {
                done = enum_paths(pair_idx, slack_left, len, path, visited);
            }
            if (done) return true;
            path.pop_back();
            visited[y] = 0;
            residual_deg[x]++;
            residual_deg[y]++;
            edge_used[e] = 0;
            if (stop->load(std::memory_order_relaxed)) return false;
        }
        return false;
    }

    bool solve(int pair_idx, int slack_left) {
        if (pair_idx == static_cast<int>(pairs.size())) return true;
        if (!tick()) return false;
        auto [bi, bj] = pairs[pair_idx];
        int u = branch[bi];
        needs[u]--;
        needs[branch[bj]]--;
        bool ok = false;
        for (int len = lower_bound[pair_idx];
             len <= lower_bound[pair_idx] + slack_left && !ok; ++len) {
            std::vector<int> path{u};
            std::vector<char> visited(cg.n, 0);
            visited[u] = 1;
            ok = enum_paths(pair_idx, slack_left - (len - lower_bound[pair_idx]), len, path,
                            visited);
            if (stop->load(std::memory_order_relaxed) && !ok) break;
        }
        if (!ok) {
            needs[u]++;
            needs[branch[bj]]++;
        }
        return ok;
    }
};

// canonical under within-class prefixes and count-sorted interchange groups
struct SymmetryFilter {
    std::vector<std::vector<int>> classes;       // compact indices, sorted
    std::vector<int> class_of;                   // vertex -> class
    std::vector<std::vector<std::size_t>> groups;  // interchangeable class ids

    SymmetryFilter(const MultiGraph& g, const CompactGraph& cg) {
        std::map<VertexId, int> index;
        for (int i = 0; i < cg.n; ++i) index[cg.ids[i]] = i;
        for (const auto& cls : twin_classes(g)) {
            std::vector<int> c;
            for (VertexId v : cls) c.push_back(index.at(v));
            std::sort(c.begin(), c.end());
            classes.push_back(std::move(c));
        }
        class_of.assign(cg.n, -1);
        for (std::size_t ci = 0; ci < classes.size(); ++ci) {
            for (int v : classes[ci]) class_of[v] = static_cast<int>(ci);
        }
        // Twin classes relate to each other all-or-nothing, so swapping two
        // whole classes is an automorphism iff they have the same size, the
        // same internal type, and the same relation to every third class.
        // That pairwise relation is transitive, giving interchange groups.
        auto rel = [&](std::size_t a, std::size_t b) {
            int u = classes[a].front();
            int v = classes[b].front();
            for (auto [y, e] : cg.adj[u]) {
                (void)e;
                if (y == v) return 1;
            }
            return 0;
        };
        auto internal_type = [&](std::size_t a) {
            if (classes[a].size() < 2) return 0;
            int u = classes[a][0], v = classes[a][1];
            for (auto [y, e] : cg.adj[u]) {
                (void)e;
                if (y == v) return 2;  // clique class
            }
            return 1;  // independent class
        };
        auto interchangeable = [&](std::size_t a, std::size_t b) {
            if (classes[a].size() != classes[b].size()) return false;
            if (internal_type(a) != internal_type(b)) return false;
            for (std::size_t c = 0; c < classes.size(); ++c) {
                if (c == a || c == b) continue;
                if (rel(a, c) != rel(b, c)) return false;
            }
            return true;
        };
        std::vector<char> taken(classes.size(), 0);
        for (std::size_t a = 0; a < classes.size(); ++a) {
            if (taken[a]) continue;
            std::vector<std::size_t> grp{a};
            for (std::size_t b = a + 1; b < classes.size(); ++b) {
                if (!taken[b] && interchangeable(a, b)) {
                    grp.push_back(b);
                    taken[b] = 1;
                }
            }
            if (grp.size() >= 2) groups.push_back(grp);
        }
    }

    bool canonical(const std::vector<int>& subset) const {
        std::vector<int> count(classes.size(), 0);
        std::vector<char> in(class_of.size(), 0);
        for (int v : subset) {
            ++count[class_of[v]];
            in[v] = 1;
        }
        // within each class the chosen vertices must be the lowest prefix
        for (std::size_t c = 0; c < classes.size(); ++c) {
            for (int i = 0; i < count[c]; ++i) {
                if (!in[classes[c][i]]) return false;
            }
        }
        // counts non-increasing along each interchange group
        for (const auto& grp : groups) {
            for (std::size_t k = 1; k < grp.size(); ++k) {
                if (count[grp[k - 1]] < count[grp[k]]) return false;
            }
        }
        return true;
    }
};

}  // namespace

OracleResult decide_immersion(const MultiGraph& g, int t, bool strong,
                              const OracleBudget& budget, int jobs) {
    if (t < 1) throw Error(ErrorKind::BadParams, "t must be positive");
    if (!g.is_simple()) throw Error(ErrorKind::NotSimple, "oracle input must be simple");
    OracleResult result;
    if (g.num_vertices() < static_cast<std::size_t>(t)) {
        result.kind = OracleResult::Kind::No;
        return result;
    }

    CompactGraph cg(g);
    SymmetryFilter sym(g, cg);

    // canonical branch sets, largest degree sum first
    std::vector<std::vector<int>> candidates;
    {
        std::vector<int> comb(t);
        for (int i = 0; i < t; ++i) comb[i] = i;
        while (true) {
            if (sym.canonical(comb)) candidates.push_back(comb);
            int k = t - 1;
            while (k >= 0 && comb[k] == cg.n - t + k) --k;
            if (k < 0) break;
            ++comb[k];
            for (int j = k + 1; j < t; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    std::vector<long long> degsum(candidates.size(), 0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (int v : candidates[i]) degsum[i] += static_cast<long long>(cg.adj[v].size());
    }
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return degsum[a] > degsum[b]; });

    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::atomic<bool> exhausted{false};
    std::atomic<bool> found{false};
    std::mutex win_mutex;
    ImmersionCertificate winner;
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(budget.time_cap_seconds));

    auto try_branch_set = [&](const std::vector<int>& branch) {
        PackSearch ps{cg,
                      strong,
                      branch,
                      std::vector<char>(cg.n, 0),
                      {},
                      {},
                      {},
                      std::vector<char>(cg.edges.size(), 0),
                      std::vector<int>(cg.n, 0),
                      std::vector<int>(cg.n, 0),
                      {},
                      &nodes,
                      budget.max_nodes,
                      &stop,
                      deadline,
                      budget.time_cap_seconds > 0};
        for (int v : branch) ps.in_branch[v] = 1;
        for (int v = 0; v < cg.n; ++v) ps.residual_deg[v] = static_cast<int>(cg.adj[v].size());

        ps.dist_to.assign(t, {});
        for (int k = 0; k < t; ++k) {
            ps.dist_to[k] = distance_to(cg, branch[k], strong ? ps.in_branch
                                                              : std::vector<char>(cg.n, 0));
        }
        long long lb_total = 0;
        std::vector<std::pair<int, int>> pairs;
        std::vector<int> lbs;
        for (int i = 0; i < t; ++i) {
            for (int j = i + 1; j < t; ++j) {
                int lb = ps.dist_to[j][branch[i]];
                if (lb >= kInf) return;  // disconnected pair: set infeasible
                pairs.push_back({i, j});
                lbs.push_back(lb);
                lb_total += lb;
            }
        }
        long long max_slack = static_cast<long long>(cg.edges.size()) - lb_total;
        if (max_slack < 0) return;
        std::vector<std::size_t> pair_order(pairs.size());
        for (std::size_t i = 0; i < pair_order.size(); ++i) pair_order[i] = i;
        std::stable_sort(pair_order.begin(), pair_order.end(),
                         [&](std::size_t a, std::size_t b) { return lbs[a] > lbs[b]; });
        for (std::size_t i : pair_order) {
            ps.pairs.push_back(pairs[i]);
            ps.lower_bound.push_back(lbs[i]);
        }
        ps.chosen_paths.assign(pairs.size(), {});
        for (int v : branch) ps.needs[v] = t - 1;

        long long slack = 0;
        while (true) {
            if (stop.load(std::memory_order_relaxed)) return;
            std::fill(ps.edge_used.begin(), ps.edge_used.end(), 0);
            for (int v = 0; v < cg.n; ++v) ps.residual_deg[v] = static_cast<int>(cg.adj[v].size());
            for (int v : branch) ps.needs[v] = t - 1;
            if (ps.solve(0, static_cast<int>(slack))) {
                std::vector<VertexId> branch_ids;
                for (int v : branch) branch_ids.push_back(cg.ids[v]);
                std::map<BranchPair, std::vector<VertexId>> paths;
                for (std::size_t k = 0; k < ps.pairs.size(); ++k) {
                    std::vector<VertexId> path;
                    for (int x : ps.chosen_paths[k]) path.push_back(cg.ids[x]);
                    paths[branch_pair(ps.pairs[k].first, ps.pairs[k].second)] = path;
                }
                ImmersionCertificate cert = make_certificate(g, branch_ids, paths);
                Verdict v = verify_strong_immersion(g, cert, strong);
                if (!v.accepted) {
                    throw Error(ErrorKind::InvariantBreach,
                                "oracle certificate rejected: " + v.detail);
                }
                std::lock_guard<std::mutex> lock(win_mutex);
                if (!found.load()) {
                    winner = cert;
                    found.store(true);
                }
                stop.store(true, std::memory_order_relaxed);
                return;
            }
            if (ps.out_of_budget) {
                exhausted.store(true);
                return;
            }
            if (slack >= max_slack) return;
            slack = slack == 0 ? 1 : std::min(max_slack, slack * 2);
        }
    };

    if (jobs <= 1) {
        for (std::size_t i : order) {
            if (stop.load(std::memory_order_relaxed)) break;
            try_branch_set(candidates[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) {
            pool.emplace_back([&]() {
                while (!stop.load(std::memory_order_relaxed)) {
                    std::size_t k = next.fetch_add(1);
                    if (k >= order.size()) break;
                    try_branch_set(candidates[order[k]]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    result.nodes = nodes.load();
    if (found.load()) {
        result.kind = OracleResult::Kind::Yes;
        result.certificate = winner;
    } else if (exhausted.load()) {
        result.kind = OracleResult::Kind::Exhausted;
    } else {
        result.kind = OracleResult::Kind::No;
    }
    return result;
}

SampledReport sampled_mindegree_property(int t, int n_max, int samples, std::uint64_t seed,
                                         const OracleBudget& per_instance) {
    if (t < 2 || n_max < t) throw Error(ErrorKind::BadParams, "bad sampling parameters");
    SampledReport report;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        int n = t + static_cast<int>(rng() % (n_max - t + 1));
        MultiGraph g;
        for (int i = 0; i < n; ++i) g.add_vertex();
        int percent = 30 + static_cast<int>(rng() % 60);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (static_cast<int>(rng() % 100) < percent) g.add_edge(i, j);
            }
        }
        // raise deficient vertices to degree >= t-1
        for (VertexId v : g.vertices()) {
            while (g.degree(v) < static_cast<std::size_t>(t - 1)) {
                VertexId w = static_cast<VertexId>(rng() % n);
                if (w != v && !g.adjacent(v, w)) g.add_edge(v, w);
            }
        }
        OracleResult r = decide_immersion(g, t, false, per_instance);
        ++report.samples;
        switch (r.kind) {
            case OracleResult::Kind::Yes: ++report.yes; break;
            case OracleResult::Kind::Exhausted: ++report.exhausted; break;
            case OracleResult::Kind::No: {
                ++report.no;
                std::ostringstream os;
                os << "counterexample candidate on " << n << " vertices (seed " << seed
                   << ", sample " << s << "): ";
                os << g.canonical_edge_list();
                report.findings.push_back(os.str());
                break;
            }
        }
    }
    return report;
}

}  // namespace immersion
