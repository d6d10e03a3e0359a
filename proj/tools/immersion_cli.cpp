// Command-line front end: extract / verify / oracle / gen / selftest / bench.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "immersion/certify.hpp"
#include "immersion/extract.hpp"
#include "immersion/gen.hpp"
#include "immersion/io.hpp"
#include "immersion/oracle.hpp"
#include "immersion/selftest.hpp"

using namespace immersion;

namespace {

std::uint64_t default_seed() {
    const char* env = std::getenv("IMMERSION_SEED");
    if (env == nullptr) return 0;
    return std::strtoull(env, nullptr, 10);
}

std::map<std::string, std::string> parse_params(const std::string& params) {
    std::map<std::string, std::string> out;
    std::stringstream ss(params);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::BadParams, "expected key=value in --params: " + item);
        }
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

int param_int(const std::map<std::string, std::string>& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw Error(ErrorKind::BadParams, "missing parameter " + key);
    return std::stoi(it->second);
}

MultiGraph generate(const std::string& family, const std::string& params, std::uint64_t seed) {
    auto p = parse_params(params);
    if (family == "complete") return gen_complete(param_int(p, "n"));
    if (family == "complete_multipartite") {
        auto it = p.find("parts");
        if (it == p.end()) throw Error(ErrorKind::BadParams, "missing parameter parts");
        std::vector<int> parts;
        std::stringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, '+')) parts.push_back(std::stoi(tok));
        return gen_complete_multipartite(parts);
    }
    if (family == "ktt") return gen_ktt(param_int(p, "t"));
    if (family == "seymour12") return gen_seymour12();
    if (family == "random_regular") {
        return gen_random_regular(param_int(p, "n"), param_int(p, "d"), seed);
    }
    if (family == "two_blocks_thin_cut") {
        return gen_two_blocks_thin_cut(param_int(p, "n"), param_int(p, "d"),
                                       param_int(p, "cut"), seed);
    }
    throw Error(ErrorKind::BadParams, "unknown family " + family);
}

struct BenchRow {
    std::string instance;
    int t = 0;
    int d = 0;
    double millis = 0;
    int splits = 0;
    int grows = 0;
    std::size_t cert_path_vertices = 0;
    int tree_max_degree = 0;
    int nearreg_slack = 6;
    bool verified = false;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strong clique immersions: extraction, verification, oracle"};
    app.require_subcommand(1);

    // ---- extract ----
    auto* cmd_extract = app.add_subcommand("extract", "extract a K_t strong immersion");
    int ex_t = 0;
    std::string ex_in, ex_out, ex_trace;
    std::uint64_t ex_seed = default_seed();
    std::string ex_fallback = "allow6";
    cmd_extract->add_option("--t", ex_t, "clique order")->required();
    cmd_extract->add_option("--in", ex_in, "input graph file")->required();
    cmd_extract->add_option("--out", ex_out, "output certificate file")->required();
    cmd_extract->add_option("--trace", ex_trace, "JSONL trace output");
    cmd_extract->add_option("--seed", ex_seed, "seed (default $IMMERSION_SEED or 0)");
    cmd_extract->add_option("--tree-fallback", ex_fallback, "strict5 | allow6")
        ->check(CLI::IsMember({"strict5", "allow6"}));

    // ---- verify ----
    auto* cmd_verify = app.add_subcommand("verify", "verify a certificate against a graph");
    std::string vf_in, vf_cert;
    bool vf_weak = false;
    cmd_verify->add_option("--in", vf_in, "input graph file")->required();
    cmd_verify->add_option("--cert", vf_cert, "certificate file")->required();
    cmd_verify->add_flag("--weak", vf_weak, "skip the internal-branch-vertex clause");

    // ---- oracle ----
    auto* cmd_oracle = app.add_subcommand("oracle", "exhaustive immersion decision");
    int or_t = 0;
    std::string or_in;
    bool or_strong = false;
    std::uint64_t or_budget = 100'000'000;
    int or_jobs = 1;
    cmd_oracle->add_option("--t", or_t, "clique order")->required();
    cmd_oracle->add_option("--in", or_in, "input graph file")->required();
    cmd_oracle->add_flag("--strong", or_strong, "require a strong immersion");
    cmd_oracle->add_option("--budget", or_budget, "search node budget");
    cmd_oracle->add_option("--jobs", or_jobs, "parallel workers over branch sets");

    // ---- gen ----
    auto* cmd_gen = app.add_subcommand("gen", "generate an instance");
    std::string gn_family, gn_params, gn_out;
    std::uint64_t gn_seed = default_seed();
    cmd_gen->add_option("--family", gn_family, "instance family")->required();
    cmd_gen->add_option("--params", gn_params, "comma-separated key=value list");
    cmd_gen->add_option("--seed", gn_seed, "seed");
    cmd_gen->add_option("--out", gn_out, "output graph file")->required();

    // ---- selftest ----
    auto* cmd_selftest = app.add_subcommand("selftest", "run the invariant suites");
    std::string st_level = "quick";
    std::uint64_t st_seed = default_seed();
    cmd_selftest->add_option("--level", st_level, "quick | full")
        ->check(CLI::IsMember({"quick", "full"}));
    cmd_selftest->add_option("--seed", st_seed, "seed");

    // ---- bench ----
    auto* cmd_bench = app.add_subcommand("bench", "timed extraction suite");
    std::string bn_suite = "default", bn_out;
    std::uint64_t bn_seed = default_seed();
    cmd_bench->add_option("--suite", bn_suite, "suite name");
    cmd_bench->add_option("--out", bn_out, "JSON report path")->required();
    cmd_bench->add_option("--seed", bn_seed, "seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_extract) {
            MultiGraph g = read_graph_file(ex_in);
            std::ofstream trace_out;
            TraceSink sink;
            if (!ex_trace.empty()) {
                trace_out.open(ex_trace);
                if (!trace_out) {
                    std::cerr << "cannot write " << ex_trace << "\n";
                    return 1;
                }
                sink = [&](const TraceRecord& rec) {
                    nlohmann::json j{{"kind", rec.kind}, {"A", rec.a_size}, {"B", rec.b_size},
                                     {"V", rec.v_size}, {"Q", rec.q_size}, {"R", rec.r_size}};
                    trace_out << j.dump() << "\n";
                };
            }
            ExtractOptions opts;
            opts.seed = ex_seed;
            opts.allow_degree_six = ex_fallback == "allow6";
            ExtractReport report;
            try {
                ImmersionCertificate cert = extract(g, ex_t, opts, sink, &report);
                write_certificate_file(ex_out, cert);
                std::cout << "extracted K_" << ex_t << " certificate (d=" << report.d
                          << ", splits=" << report.split_rounds << ", grows="
                          << report.grow_steps << ")\n";
                return 0;
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::DegreeTooLow) {
                    std::cerr << e.what() << "\n";
                    return 2;
                }
                if (e.kind() == ErrorKind::InvariantBreach ||
                    e.kind() == ErrorKind::LiftViolation ||
                    e.kind() == ErrorKind::TargetUnreached) {
                    std::cerr << e.what() << "\n";
                    return 3;
                }
                throw;
            }
        }

        if (*cmd_verify) {
            MultiGraph g = read_graph_file(vf_in);
            ImmersionCertificate cert = read_certificate_file(vf_cert);
            try {
                Verdict v = verify_strong_immersion(g, cert, !vf_weak);
                if (v.accepted) {
                    std::cout << "accept\n";
                    return 0;
                }
                std::cout << "reject clause " << verify_clause_name(v.clause) << ": " << v.detail
                          << "\n";
                return 1;
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::DigestMismatch) {
                    std::cout << "reject clause digest: " << e.what() << "\n";
                    return 1;
                }
                throw;
            }
        }

        if (*cmd_oracle) {
            MultiGraph g = read_graph_file(or_in);
            OracleBudget budget;
            budget.max_nodes = or_budget;
            OracleResult r = decide_immersion(g, or_t, or_strong, budget, or_jobs);
            if (r.kind == OracleResult::Kind::Yes) {
                std::cout << "yes (" << r.nodes << " nodes)\n";
                return 0;
            }
            if (r.kind == OracleResult::Kind::No) {
                std::cout << "no (" << r.nodes << " nodes)\n";
                return 1;
            }
            std::cout << "exhausted (" << r.nodes << " nodes)\n";
            return 4;
        }

        if (*cmd_gen) {
            MultiGraph g = generate(gn_family, gn_params, gn_seed);
            write_graph_file(gn_out, g);
            std::cout << "wrote " << gn_out << " (" << g.num_vertices() << " vertices, "
                      << g.num_edges() << " edges)\n";
            return 0;
        }

        if (*cmd_selftest) {
            auto results = run_selftest(st_level, st_seed);
            for (const auto& r : results) {
                std::cout << (r.violations == 0 ? "PASS " : "FAIL ") << r.name << ": " << r.cases
                          << " cases, " << r.violations << " violations";
                if (!r.note.empty()) std::cout << " (" << r.note << ")";
                std::cout << "\n";
            }
            return all_clean(results) ? 0 : 1;
        }

        if (*cmd_bench) {
            if (bn_suite != "default") {
                std::cerr << "unknown suite " << bn_suite << "\n";
                return 1;
            }
            std::vector<std::pair<std::string, std::pair<MultiGraph, int>>> instances;
            for (int t : {1, 2, 3}) {
                int dmin = 11 * t + 7;
                instances.push_back({"complete-K" + std::to_string(dmin + 1),
                                     {gen_complete(dmin + 1), t}});
                int n = std::max(3 * dmin / 2, 60);
                if ((n * dmin) % 2 != 0) ++n;
                instances.push_back({"random-regular-n" + std::to_string(n) + "-d" +
                                         std::to_string(dmin),
                                     {gen_random_regular(n, dmin, bn_seed + t), t}});
                int half = dmin + 5;
                instances.push_back(
                    {"two-blocks-n" + std::to_string(2 * half) + "-d" + std::to_string(dmin),
                     {gen_two_blocks_thin_cut(2 * half, dmin, 3, bn_seed + 10 + t), t}});
            }
            std::vector<BenchRow> rows;
            for (auto& [name, inst] : instances) {
                BenchRow row;
                row.instance = name;
                row.t = inst.second;
                ExtractReport report;
                auto start = std::chrono::steady_clock::now();
                ImmersionCertificate cert =
                    extract(inst.first, inst.second, ExtractOptions{bn_seed, true}, {}, &report);
                auto stop = std::chrono::steady_clock::now();
                row.millis = std::chrono::duration<double, std::milli>(stop - start).count();
                row.d = report.d;
                row.splits = report.split_rounds;
                row.grows = report.grow_steps;
                row.tree_max_degree = report.prep.tree_max_degree;
                row.nearreg_slack = report.prep.nearreg_slack;
                for (const auto& [_, path] : cert.paths) row.cert_path_vertices += path.size();
                row.verified = verify_strong_immersion(inst.first, cert).accepted;
                rows.push_back(row);
                std::cout << name << ": " << row.millis << " ms\n";
            }
            nlohmann::json out = nlohmann::json::array();
            for (const auto& r : rows) {
                out.push_back({{"instance", r.instance},
                               {"t", r.t},
                               {"d", r.d},
                               {"millis", r.millis},
                               {"splits", r.splits},
                               {"grows", r.grows},
                               {"cert_path_vertices", r.cert_path_vertices},
                               {"tree_max_degree", r.tree_max_degree},
                               {"nearreg_slack", r.nearreg_slack},
                               {"verified", r.verified}});
            }
            std::ofstream f(bn_out);
            if (!f) {
                std::cerr << "cannot write " << bn_out << "\n";
                return 1;
            }
            f << out.dump(2) << "\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        if (*cmd_oracle) return 5;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
