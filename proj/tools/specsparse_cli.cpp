// specsparse command line: expander construction/certification, universal
// sparsification, deterministic singular value estimation, PSD testing,
// binary-magnitude PSD recovery, high-accuracy spectral norm, reference
// certification, and a queries-vs-accuracy benchmark.
//
// Reports are JSON on stdout (or --report PATH); --human appends a summary
// table to stderr. Exit codes: 0 success, 1 computation error (with a
// structured error record), 2 usage error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specsparse/specsparse.hpp"

using nlohmann::json;
using namespace specsparse;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void emit(const json& report, const std::string& report_path, bool human) {
    if (report_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(report_path);
        if (!out) throw IoError("cannot open '" + report_path + "' for writing");
        out << report.dump(2) << "\n";
        std::cout << report.dump(2) << "\n";
    }
    if (human) {
        std::cerr << "---\n";
        for (auto& [key, value] : report.items())
            if (!value.is_structured())
                std::cerr << "  " << key << " = " << value.dump() << "\n";
    }
}

EntryOracle load_oracle(const std::string& path) {
    MatrixMarketData d = read_matrix_market(path);
    if (!d.dense.is_symmetric())
        throw AsymmetricInput(path + ": input matrix must be symmetric");
    if (d.dense.max_abs() > 1.0)
        throw EntryOutOfRange(path + ": entries must lie in [-1, 1]; rescale first");
    return from_dense(d.dense, true, true);
}

json graph_json(const CirculantExpander& g) {
    return json{{"n", g.n}, {"shifts", g.shifts}};
}

CirculantExpander graph_from_json(const json& j) {
    CirculantExpander g;
    g.n = j.at("n").get<int>();
    g.shifts = j.at("shifts").get<std::vector<int>>();
    return g;
}

json cert_json(const ExpanderCertificate& c) {
    return json{{"n", c.n}, {"d", c.d}, {"eps_hat", c.eps_hat}};
}

/// Largest eps whose general-case requirement eps^2/(4 log2^2(1/eps)) is met
/// by the achieved certificate quality. Monotone, so bisection.
double invert_general_eps(double eps_hat) {
    auto f = [](double e) { return general_eps_prime(e, 4.0); };
    double lo = 1e-9, hi = 0.999999;
    if (f(hi) <= eps_hat) return hi;
    if (f(lo) >= eps_hat) return lo;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) <= eps_hat ? lo : hi) = mid;
    }
    return lo;
}

struct CommonOpts {
    int threads = 0;
    bool human = false;
    std::string report_path;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--threads", c.threads, "worker threads (results are thread-count independent)");
    cmd->add_flag("--human", c.human, "append a human-readable summary");
    cmd->add_option("--report", c.report_path, "also write the JSON report to this path");
}

void apply_threads(const CommonOpts& c) {
    int t = c.threads;
    if (t <= 0) {
        if (const char* env = std::getenv("SPECSPARSE_THREADS")) t = std::atoi(env);
    }
    if (t > 0) set_num_threads(t);
}

int run(int argc, char** argv) {
    CLI::App app{"deterministic expander-based spectral approximation toolkit"};
    app.require_subcommand(1);

    // ---- expander build / certify ----
    auto* exp_cmd = app.add_subcommand("expander", "build or certify sampling graphs");
    exp_cmd->require_subcommand(1);

    auto* exp_build = exp_cmd->add_subcommand("build", "build a certified circulant expander");
    int eb_n = 0;
    double eb_eps = 0.0;
    std::uint64_t eb_seed = 0;
    std::string eb_graph_out;
    CommonOpts eb_c;
    exp_build->add_option("--n", eb_n, "vertex count")->required();
    exp_build->add_option("--eps", eb_eps, "certificate target")->required();
    exp_build->add_option("--seed", eb_seed, "shift-order seed")->required();
    exp_build->add_option("--out", eb_graph_out, "write the graph JSON here");
    add_common(exp_build, eb_c);
    exp_build->callback([&] {
        apply_threads(eb_c);
        Timer timer;
        auto [g, c] = build_for_epsilon(eb_n, eb_eps, eb_seed);
        if (!eb_graph_out.empty()) {
            std::ofstream out(eb_graph_out);
            if (!out) throw IoError("cannot open '" + eb_graph_out + "' for writing");
            out << graph_json(g).dump(2) << "\n";
        }
        json rep{{"command", "expander build"},
                 {"n", eb_n},
                 {"eps", eb_eps},
                 {"seed", eb_seed},
                 {"degree", c.d},
                 {"eps_hat", c.eps_hat},
                 {"attained", c.eps_hat <= eb_eps},
                 {"graph", graph_json(g)},
                 {"certificate", cert_json(c)},
                 {"wall_time_ms", timer.ms()}};
        emit(rep, eb_c.report_path, eb_c.human);
    });

    auto* exp_cert = exp_cmd->add_subcommand("certify", "recompute a graph's certificate");
    std::string ec_graph;
    CommonOpts ec_c;
    exp_cert->add_option("--graph", ec_graph, "graph JSON file")->required();
    add_common(exp_cert, ec_c);
    exp_cert->callback([&] {
        apply_threads(ec_c);
        Timer timer;
        std::ifstream in(ec_graph);
        if (!in) throw IoError("cannot open '" + ec_graph + "' for reading");
        json j = json::parse(in);
        CirculantExpander g = graph_from_json(j);
        ExpanderCertificate c = certify(g);
        json rep{{"command", "expander certify"},
                 {"n", g.n},
                 {"degree", c.d},
                 {"eps_hat", c.eps_hat},
                 {"certificate", cert_json(c)},
                 {"wall_time_ms", timer.ms()}};
        emit(rep, ec_c.report_path, ec_c.human);
    });

    // ---- sparsify ----
    auto* sp_cmd = app.add_subcommand("sparsify", "apply the universal sparsifier");
    std::string sp_in, sp_out, sp_class = "psd";
    double sp_eps = 0.0;
    std::uint64_t sp_seed = 0;
    bool sp_certify = false;
    CommonOpts sp_c;
    sp_cmd->add_option("--in", sp_in, "input matrix (.mtx)")->required();
    sp_cmd->add_option("--class", sp_class, "matrix class: psd | general")
        ->check(CLI::IsMember({"psd", "general"}));
    sp_cmd->add_option("--eps", sp_eps, "target accuracy")->required();
    sp_cmd->add_option("--seed", sp_seed, "plan seed")->required();
    sp_cmd->add_option("--out", sp_out, "write the sparsified matrix here (.mtx)");
    sp_cmd->add_flag("--certify", sp_certify, "also measure the achieved error with the dense oracle");
    add_common(sp_cmd, sp_c);
    sp_cmd->callback([&] {
        apply_threads(sp_c);
        Timer timer;
        MatrixMarketData d = read_matrix_market(sp_in);
        EntryOracle a = from_dense(d.dense, true, true);
        MatrixClass cls = sp_class == "psd" ? MatrixClass::Psd : MatrixClass::General;
        SparsifierPlan p = plan(cls, sp_eps, a.n(), sp_seed);
        SparseSymMatrix atilde = sparsify(a, p);
        if (!sp_out.empty()) write_matrix_market(sp_out, atilde);

        json rep{{"command", "sparsify"},
                 {"n", a.n()},
                 {"class", sp_class},
                 {"eps", sp_eps},
                 {"eps_prime", p.eps_prime},
                 {"seed", sp_seed},
                 {"eps_hat", p.certificate.eps_hat},
                 {"degree", p.certificate.d},
                 {"queries", a.queries()},
                 {"queries_doubled", a.queries_doubled()}};
        double bound;
        if (cls == MatrixClass::Psd) {
            bound = p.certificate.eps_hat * a.n();
        } else {
            double eps_ach = invert_general_eps(p.certificate.eps_hat);
            rep["eps_achieved"] = eps_ach;
            bound = eps_ach * a.n();
            if (sp_certify) bound = eps_ach * std::max<double>(a.n(), nuclear_norm(d.dense));
        }
        rep["certified_bound"] = bound;
        if (sp_certify) rep["achieved_error"] = certify_error(d.dense, atilde);
        rep["wall_time_ms"] = timer.ms();
        emit(rep, sp_c.report_path, sp_c.human);
    });

    // ---- singvals ----
    auto* sv_cmd = app.add_subcommand("singvals", "deterministic singular value estimation");
    std::string sv_in, sv_out, sv_vectors;
    double sv_eps = 0.0;
    std::uint64_t sv_seed = 0;
    CommonOpts sv_c;
    sv_cmd->add_option("--in", sv_in, "input matrix (.mtx)")->required();
    sv_cmd->add_option("--eps", sv_eps, "accuracy parameter")->required();
    sv_cmd->add_option("--seed", sv_seed, "plan seed")->required();
    sv_cmd->add_option("--out", sv_out, "write the JSON report here");
    sv_cmd->add_option("--vectors", sv_vectors, "write the deflation vectors here (.mtx)");
    add_common(sv_cmd, sv_c);
    sv_cmd->callback([&] {
        apply_threads(sv_c);
        Timer timer;
        EntryOracle a = load_oracle(sv_in);
        SingvalsResult r = approx_all_singvals(a, sv_eps, sv_seed);
        if (!sv_vectors.empty()) write_matrix_market(sv_vectors, r.vectors);
        json values = json::array();
        for (std::size_t i = 0; i < r.sigma.size(); ++i)
            values.push_back({{"sigma_tilde", r.sigma[i]}, {"certified_radius", r.certified_radius}});
        json rep{{"command", "singvals"},
                 {"n", a.n()},
                 {"eps", sv_eps},
                 {"seed", sv_seed},
                 {"degree", r.plan.certificate.d},
                 {"eps_hat", r.plan.certificate.eps_hat},
                 {"queries", r.queries},
                 {"queries_doubled", r.queries_doubled},
                 {"certified_radius", r.certified_radius},
                 {"top_k", r.deflation.estimates.size()},
                 {"values", values},
                 {"wall_time_ms", timer.ms()}};
        std::string path = !sv_out.empty() ? sv_out : sv_c.report_path;
        emit(rep, path, sv_c.human);
    });

    // ---- psdtest ----
    auto* pt_cmd = app.add_subcommand("psdtest", "PSD vs far-from-PSD verdict");
    std::string pt_in;
    double pt_eps = 0.0;
    std::uint64_t pt_seed = 0;
    CommonOpts pt_c;
    pt_cmd->add_option("--in", pt_in, "input matrix (.mtx)")->required();
    pt_cmd->add_option("--eps", pt_eps, "gap parameter")->required();
    pt_cmd->add_option("--seed", pt_seed, "plan seed")->required();
    add_common(pt_cmd, pt_c);
    pt_cmd->callback([&] {
        apply_threads(pt_c);
        Timer timer;
        EntryOracle a = load_oracle(pt_in);
        PsdVerdict v = psd_test(a, pt_eps, pt_seed);
        json rep{{"command", "psdtest"},
                 {"n", a.n()},
                 {"eps", pt_eps},
                 {"seed", pt_seed},
                 {"verdict", v.verdict == PsdVerdictKind::Psd ? "PSD" : "FarFromPSD"},
                 {"sigma1_atilde", v.sigma1_atilde},
                 {"sigma1_b", v.sigma1_b},
                 {"threshold", v.threshold},
                 {"degenerate_scale", v.degenerate_scale},
                 {"queries", v.queries},
                 {"queries_doubled", a.queries_doubled()},
                 {"wall_time_ms", timer.ms()}};
        emit(rep, pt_c.report_path, pt_c.human);
    });

    // ---- binarypsd ----
    auto* bp_cmd = app.add_subcommand("binarypsd", "recover a PSD {-1,0,1} matrix from sampled components");
    std::string bp_in, bp_out, bp_mode = "seeded";
    double bp_eps = 0.0;
    std::uint64_t bp_seed = 0;
    CommonOpts bp_c;
    bp_cmd->add_option("--in", bp_in, "input matrix (.mtx)")->required();
    bp_cmd->add_option("--eps", bp_eps, "accuracy parameter")->required();
    bp_cmd->add_option("--seed", bp_seed, "expander seed")->required();
    bp_cmd->add_option("--mode", bp_mode, "expander mode: seeded | certified")
        ->check(CLI::IsMember({"seeded", "certified"}));
    bp_cmd->add_option("--out", bp_out, "write the recovered matrix here (.mtx)");
    add_common(bp_cmd, bp_c);
    bp_cmd->callback([&] {
        apply_threads(bp_c);
        Timer timer;
        EntryOracle a = load_oracle(bp_in);
        ExpanderMode mode = bp_mode == "seeded" ? ExpanderMode::Seeded : ExpanderMode::Certified;
        RecoveredApprox r = binary_psd_approx(a, bp_eps, bp_seed, mode);
        if (!bp_out.empty()) write_matrix_market(bp_out, r.atilde);
        json comps = json::array();
        for (const auto& c : r.components_used)
            comps.push_back({{"size", c.vertices.size()}, {"representative", c.representative}});
        json rep{{"command", "binarypsd"},
                 {"n", a.n()},
                 {"eps", bp_eps},
                 {"seed", bp_seed},
                 {"mode", bp_mode},
                 {"degree", r.graph.degree()},
                 {"edges_sampled", r.edges_sampled},
                 {"components_used", comps},
                 {"queries", r.queries},
                 {"queries_doubled", a.queries_doubled()},
                 {"query_budget", static_cast<double>(r.edges_sampled) + 2.0 / bp_eps * a.n()},
                 {"certified_bound", bp_eps * a.n()},
                 {"wall_time_ms", timer.ms()}};
        emit(rep, bp_c.report_path, bp_c.human);
    });

    // ---- specnorm ----
    auto* sn_cmd = app.add_subcommand("specnorm", "high-accuracy spectral norm under the alpha promise");
    std::string sn_in;
    double sn_alpha = 0.0, sn_eps = 0.0;
    std::uint64_t sn_seed = 0;
    CommonOpts sn_c;
    sn_cmd->add_option("--in", sn_in, "input matrix (.mtx)")->required();
    sn_cmd->add_option("--alpha", sn_alpha, "promise parameter")->required();
    sn_cmd->add_option("--eps", sn_eps, "relative accuracy")->required();
    sn_cmd->add_option("--seed", sn_seed, "plan seed")->required();
    add_common(sn_cmd, sn_c);
    sn_cmd->callback([&] {
        apply_threads(sn_c);
        Timer timer;
        EntryOracle a = load_oracle(sn_in);
        SpecnormResult r = high_accuracy_specnorm(a, sn_alpha, sn_eps, sn_seed);
        json rep{{"command", "specnorm"},
                 {"n", a.n()},
                 {"alpha", sn_alpha},
                 {"eps", sn_eps},
                 {"seed", sn_seed},
                 {"sigma_tilde", r.sigma_tilde},
                 {"iterations", r.iterations},
                 {"block_size", r.block_size},
                 {"queries_sparsify", r.queries_sparsify},
                 {"queries_total", r.queries_total},
                 {"queries_doubled", a.queries_doubled()},
                 {"wall_time_ms", timer.ms()}};
        emit(rep, sn_c.report_path, sn_c.human);
    });

    // ---- certify ----
    auto* cf_cmd = app.add_subcommand("certify", "exact error measurement via the dense oracle");
    std::string cf_a, cf_b;
    CommonOpts cf_c;
    cf_cmd->add_option("--a", cf_a, "reference matrix (.mtx)")->required();
    cf_cmd->add_option("--b", cf_b, "approximation (.mtx)")->required();
    add_common(cf_cmd, cf_c);
    cf_cmd->callback([&] {
        apply_threads(cf_c);
        Timer timer;
        MatrixMarketData da = read_matrix_market(cf_a);
        MatrixMarketData db = read_matrix_market(cf_b);
        WeylReport w = weyl_check(da.dense, db.dense);
        json rep{{"command", "certify"},
                 {"n", da.dense.rows()},
                 {"spectral_err", w.spectral_err},
                 {"weyl_margin", w.margin},
                 {"max_sing_diff", w.max_sing_diff},
                 {"nuclear_a", nuclear_norm(da.dense)},
                 {"wall_time_ms", timer.ms()}};
        emit(rep, cf_c.report_path, cf_c.human);
    });

    // ---- bench ----
    auto* bn_cmd = app.add_subcommand("bench", "queries-vs-accuracy sweep (CSV)");
    std::string bn_family = "psd_random", bn_out;
    std::string bn_nlist = "256", bn_epslist = "0.25";
    std::uint64_t bn_seed = 0;
    CommonOpts bn_c;
    bn_cmd->add_option("--family", bn_family, "psd_random | general_random | binary_blocks | all_ones")
        ->check(CLI::IsMember({"psd_random", "general_random", "binary_blocks", "all_ones"}));
    bn_cmd->add_option("--n-list", bn_nlist, "comma-separated sizes");
    bn_cmd->add_option("--eps-list", bn_epslist, "comma-separated accuracies");
    bn_cmd->add_option("--seed", bn_seed, "instance seed");
    bn_cmd->add_option("--out", bn_out, "write the CSV here (default stdout)");
    add_common(bn_cmd, bn_c);
    bn_cmd->callback([&] {
        apply_threads(bn_c);
        auto parse_list = [](const std::string& s) {
            std::vector<double> out;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
            return out;
        };
        std::ostringstream csv;
        csv << "n,eps,degree,queries,achieved_error,bound\n";
        for (double nd : parse_list(bn_nlist)) {
            int n = static_cast<int>(nd);
            for (double eps : parse_list(bn_epslist)) {
                int degree = 0;
                std::uint64_t queries = 0;
                double achieved = 0.0, bound = 0.0;
                if (bn_family == "binary_blocks") {
                    DenseMatrix m = gen_signed_block_instance(n, eps, bn_seed);
                    EntryOracle a = from_dense(m, true, true);
                    RecoveredApprox r = binary_psd_approx(a, eps, bn_seed);
                    degree = r.graph.degree();
                    queries = r.queries;
                    achieved = certify_error(m, r.atilde);
                    bound = eps * n;
                } else {
                    EntryOracle a = bn_family == "psd_random"
                                        ? gen_random_psd_bounded(n, bn_seed)
                                    : bn_family == "general_random"
                                        ? gen_random_symmetric(n, bn_seed)
                                        : gen_all_ones(n);
                    MatrixClass cls = bn_family == "general_random" ? MatrixClass::General
                                                                    : MatrixClass::Psd;
                    SparsifierPlan p = plan(cls, eps, n, bn_seed);
                    SparseSymMatrix atilde = sparsify(a, p);
                    degree = p.certificate.d;
                    queries = a.queries(); // before the oracle check reads the rest
                    DenseMatrix m = a.materialize();
                    achieved = certify_error(m, atilde);
                    bound = cls == MatrixClass::Psd
                                ? p.certificate.eps_hat * n
                                : eps * std::max<double>(n, nuclear_norm(m));
                }
                csv << n << "," << eps << "," << degree << "," << queries << ","
                    << achieved << "," << bound << "\n";
            }
        }
        if (bn_out.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream out(bn_out);
            if (!out) throw IoError("cannot open '" + bn_out + "' for writing");
            out << csv.str();
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        json err{{"error", {{"type", e.type}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err{{"error", {{"type", "Unexpected"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 1;
    }
}
