#include "immersion/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace immersion {

MultiGraph parse_graph(std::istream& in) {
    MultiGraph g;
    std::string line;
    long long n = -1, m = -1, edges_seen = 0;
    std::set<VertexPair> seen;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;  // blank line
        if (tag == "c") continue;
        if (tag == "p") {
            std::string kind;
            if (n != -1 || !(ls >> kind >> n >> m) || kind != "graph" || n < 1 || m < 0) {
                throw Error(ErrorKind::ParseError,
                            "line " + std::to_string(lineno) + ": bad problem line");
            }
            for (long long i = 0; i < n; ++i) g.add_vertex();
            continue;
        }
        if (tag == "e") {
            long long u = 0, v = 0;
            if (n == -1 || !(ls >> u >> v) || u < 1 || v < 1 || u > n || v > n) {
                throw Error(ErrorKind::ParseError,
                            "line " + std::to_string(lineno) + ": bad edge line");
            }
            if (u == v) {
                throw Error(ErrorKind::ParseError,
                            "line " + std::to_string(lineno) + ": loop in a simple graph file");
            }
            VertexPair pair = ordered_pair(static_cast<VertexId>(u - 1),
                                           static_cast<VertexId>(v - 1));
            if (!seen.insert(pair).second) {
                throw Error(ErrorKind::ParseError,
                            "line " + std::to_string(lineno) + ": duplicate edge");
            }
            g.add_edge(pair.first, pair.second);
            ++edges_seen;
            continue;
        }
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(lineno) + ": unknown record '" + tag + "'");
    }
    if (n == -1) throw Error(ErrorKind::ParseError, "missing problem line");
    if (edges_seen != m) {
        throw Error(ErrorKind::ParseError, "edge count mismatch: header says " +
                                               std::to_string(m) + ", found " +
                                               std::to_string(edges_seen));
    }
    return g;
}

MultiGraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    return parse_graph(in);
}

std::string emit_graph(const MultiGraph& g) {
    if (!g.is_simple()) throw Error(ErrorKind::NotSimple, "graph files hold simple graphs");
    std::vector<VertexPair> pairs;
    for (const auto& [_, ep] : g.edges()) pairs.push_back(ep.as_pair());
    std::sort(pairs.begin(), pairs.end());
    std::ostringstream os;
    os << "p graph " << g.num_vertices() << ' ' << pairs.size() << '\n';
    for (const auto& [u, v] : pairs) os << "e " << (u + 1) << ' ' << (v + 1) << '\n';
    return os.str();
}

void write_graph_file(const std::string& path, const MultiGraph& g) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
    out << emit_graph(g);
}

ImmersionCertificate parse_certificate(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("certificate JSON: ") + e.what());
    }
    try {
        ImmersionCertificate cert;
        cert.t = j.at("t").get<int>();
        cert.host_digest = j.at("host_digest").get<std::string>();
        for (const auto& b : j.at("branch")) {
            long long v = b.get<long long>();
            if (v < 1) throw Error(ErrorKind::ParseError, "certificate branch index below 1");
            cert.branch.push_back(static_cast<VertexId>(v - 1));
        }
        for (const auto& p : j.at("paths")) {
            const auto& pair = p.at("pair");
            int i = pair.at(0).get<int>() - 1;
            int jj = pair.at(1).get<int>() - 1;
            if (i < 0 || jj < 0 || i >= cert.t || jj >= cert.t || i == jj) {
                throw Error(ErrorKind::ParseError, "certificate pair out of range");
            }
            std::vector<VertexId> path;
            for (const auto& v : p.at("vertices")) {
                long long x = v.get<long long>();
                if (x < 1) throw Error(ErrorKind::ParseError, "certificate vertex below 1");
                path.push_back(static_cast<VertexId>(x - 1));
            }
            cert.paths[branch_pair(i, jj)] = std::move(path);
        }
        return cert;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("certificate fields: ") + e.what());
    }
}

ImmersionCertificate read_certificate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    return parse_certificate(in);
}

std::string emit_certificate(const ImmersionCertificate& cert) {
    nlohmann::json j;
    j["t"] = cert.t;
    j["host_digest"] = cert.host_digest;
    j["branch"] = nlohmann::json::array();
    for (VertexId v : cert.branch) j["branch"].push_back(v + 1);
    j["paths"] = nlohmann::json::array();
    for (const auto& [key, path] : cert.paths) {
        nlohmann::json entry;
        entry["pair"] = {key.first + 1, key.second + 1};
        entry["vertices"] = nlohmann::json::array();
        for (VertexId v : path) entry["vertices"].push_back(v + 1);
        j["paths"].push_back(entry);
    }
    return j.dump(2) + "\n";
}

void write_certificate_file(const std::string& path, const ImmersionCertificate& cert) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
    out << emit_certificate(cert);
}

}  // namespace immersion
