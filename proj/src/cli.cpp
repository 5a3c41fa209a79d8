#include "qmatch/cli.hpp"

#include "qmatch/certify.hpp"
#include "qmatch/epr.hpp"
#include "qmatch/error.hpp"
#include "qmatch/graph.hpp"
#include "qmatch/oracle.hpp"
#include "qmatch/qmc.hpp"
#include "qmatch/quantum.hpp"
#include "qmatch/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace qmatch::cli {

using report::fmt;

std::vector<double> ThetaRange::points() const {
    std::vector<double> out;
    const double span = (stop - start) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
}

ThetaRange parse_theta_range(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InputError("theta range must be 'start:stop:step'");
    ThetaRange r;
    double* dst[3] = {&r.start, &r.stop, &r.step};
    for (int k = 0; k < 3; ++k) {
        try {
            std::size_t used = 0;
            *dst[k] = std::stod(parts[k], &used);
            if (used != parts[k].size() || !std::isfinite(*dst[k])) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw InputError("theta range has a malformed number '" + parts[k] + "'");
        }
    }
    if (!(r.step > 0.0)) throw InputError("theta step must be positive");
    if (r.stop < r.start) throw InputError("theta range stop is below start");
    if ((r.stop - r.start) / r.step > 1e6) throw InputError("theta range has too many points");
    return r;
}

namespace {

struct Options {
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format;

    std::string graph_path;
    double theta = 0.0;
    bool theta_set = false;
    bool no_simulate = false;
    std::string provider = "exact_search";
    std::string bloch_file;
    std::string moments_file;
    std::string hamiltonian = "both";

    std::string kind;
    int n = 0;
    std::string weights = "unit";
    double p = 0.5;

    double d = qmc::kStrengthenedD;
    double theta_grid = 1e-3;
    double mu_grid = 1e-3;
    double s_grid = 1e-4;
    int refine_iters = 20;
    double x_grid = 1e-5;

    std::string manifest;
    std::string theta_range;
};

std::string resolve_format(const Options& o, const std::string& fallback,
                           std::initializer_list<const char*> allowed) {
    const std::string f = o.format.empty() ? fallback : o.format;
    for (const char* a : allowed)
        if (f == a) return f;
    throw InputError("format '" + f + "' is not available for this command");
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + o.out_path + "'");
    f << text;
    if (!f) throw InputError("failed writing '" + o.out_path + "'");
}

void emit_json(const Options& o, std::ostream& out, const report::Json& j) {
    const std::string f = resolve_format(o, "json", {"json", "csv"});
    emit(o, out, f == "json" ? report::dump_json(j) : report::flat_csv(j));
}

int cmd_gen(const Options& o, std::ostream& out) {
    GeneratorSpec spec;
    spec.kind = parse_graph_kind(o.kind);
    spec.n = o.n;
    spec.seed = o.seed;
    spec.weights = parse_weight_mode(o.weights);
    spec.edge_probability = o.p;
    emit(o, out, serialize_edge_list(generate(spec)));
    return kExitOk;
}

int cmd_epr(const Options& o, std::ostream& out) {
    const Graph g = read_graph_file(o.graph_path);
    epr::RunConfig cfg;
    if (o.theta_set) cfg.theta = o.theta;
    cfg.simulate_exact = !o.no_simulate;
    const auto rep = epr::run(g, cfg);
    const std::string f = resolve_format(o, "json", {"json", "csv"});
    emit(o, out, f == "json" ? report::dump_json(report::epr_report_json(g, rep, cfg, o.seed))
                             : report::epr_report_csv(g, rep));
    return kExitOk;
}

int cmd_qmc(const Options& o, std::ostream& out, std::ostream& err) {
    const Graph g = read_graph_file(o.graph_path);
    const auto kind = qmc::parse_provider_kind(o.provider);
    if (kind != qmc::ProviderKind::File && !o.bloch_file.empty())
        throw InputError("--bloch-file requires --provider file");
    std::vector<std::string> warnings;
    qmc::CombinedOptions opt;
    if (o.theta_set) opt.theta = o.theta;
    const auto rep = qmc::run_combined(g, qmc::make_provider(kind, o.seed, o.bloch_file, &warnings), opt);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    const std::string f = resolve_format(o, "json", {"json", "csv"});
    emit(o, out, f == "json" ? report::dump_json(report::qmc_report_json(g, rep, kind, o.seed))
                             : report::qmc_report_csv(g, rep));
    return kExitOk;
}

int cmd_exact(const Options& o, std::ostream& out) {
    const Graph g = read_graph_file(o.graph_path);
    std::vector<Hamiltonian> kinds;
    if (o.hamiltonian == "both") kinds = {Hamiltonian::Qmc, Hamiltonian::Epr};
    else kinds = {parse_hamiltonian(o.hamiltonian)};
    std::vector<TopEigenpair> tops;
    for (auto h : kinds) {
        tops.push_back(top_eigenpair(h, g));
        if (!tops.back().converged) throw InvariantViolation("power iteration did not converge");
    }
    emit_json(o, out, report::exact_json(g, kinds, tops, o.seed));
    return kExitOk;
}

int cmd_certify_epr(const Options& o, std::ostream& out) {
    const auto c = certify::certify_epr_min(o.x_grid);
    emit_json(o, out, report::epr_certificate_json(c, o.seed));
    return kExitOk;
}

int cmd_certify_qmc(const Options& o, std::ostream& out) {
    certify::CertifyConfig cfg;
    cfg.d = o.d;
    cfg.theta_grid = o.theta_grid;
    cfg.mu_grid = o.mu_grid;
    cfg.s_grid = o.s_grid;
    cfg.refine_iters = o.refine_iters;
    if (o.moments_file.empty() != o.graph_path.empty())
        throw InputError("a moment file and a graph file must be given together");
    std::optional<report::Json> moment;
    if (!o.moments_file.empty()) {
        const Graph g = read_graph_file(o.graph_path);
        const auto b = certify::moment_upper_bound(g, certify::read_moment_file(o.moments_file), o.d);
        moment = report::moment_bound_json(g, b, o.d, o.seed);
    }
    auto j = report::qmc_certificate_json(certify::certify_qmc_ratio(cfg), o.seed);
    if (moment) j["moment_bound"] = *moment;
    emit_json(o, out, j);
    return kExitOk;
}

int cmd_certify_appendix(const Options& o, std::ostream& out) {
    const auto r = certify::check_appendix_B();
    emit_json(o, out, report::appendix_b_json(r, o.seed));
    return r.all_passed() ? kExitOk : kExitInvariant;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    resolve_format(o, "csv", {"csv"});
    const std::string path = o.manifest.empty() ? oracle::default_corpus_path() : o.manifest;
    const auto entries = oracle::read_corpus_manifest(path);
    const auto kind = qmc::parse_provider_kind(o.provider);
    if (kind == qmc::ProviderKind::File) throw InputError("verify cannot use the file provider");
    const auto rows = oracle::run_corpus(entries, o.seed, kind, o.theta_set ? o.theta : qmc::kDefaultTheta);
    emit(o, out, oracle::corpus_csv(rows));
    const auto s = oracle::summarize(rows);
    err << "instances: " << s.instances << "\n"
        << "monogamy violations: " << s.monogamy_violations << "\n"
        << "matching chain violations: " << s.chain_violations << "\n"
        << "min EPR certified ratio: " << fmt(s.min_epr_certified_ratio) << "\n"
        << "min QMC ratio: " << fmt(s.min_qmc_ratio) << " (" << s.min_qmc_instance << ")\n";
    for (const auto& name : s.below_target) err << "finding: QMC ratio below 0.611 on " << name << "\n";
    if (s.monogamy_violations || s.chain_violations || s.min_qmc_ratio < 0.5) return kExitInvariant;
    return kExitOk;
}

int cmd_sweep_epr(const Options& o, std::ostream& out) {
    resolve_format(o, "csv", {"csv"});
    const Graph g = read_graph_file(o.graph_path);
    if (g.num_vertices() > StateVector::kMaxQubits)
        throw InstanceTooLarge("sweep simulates the circuit and supports at most 20 vertices");
    const auto fm = max_weight_fractional_matching(g);
    const double upper = total_weight(g) + fm.weight;
    report::CsvWriter csv({"theta", "max_gamma", "certified", "king_bound", "exact_energy",
                           "upper_bound", "ratio_certified"});
    for (double theta : parse_theta_range(o.theta_range).points()) {
        if (theta < 0.0) throw InputError("theta must be non-negative");
        const auto gammas = epr::compute_gammas(fm.values, theta);
        double certified = 0.0, king = 0.0;
        for (std::size_t k = 0; k < g.num_edges(); ++k) {
            certified += g.edge(k).w * epr::edge_bound_T(theta, fm.values[k]);
            king += g.edge(k).w * epr::king_edge_bound(g, gammas, k);
        }
        const double exact = hamiltonian_energy(Hamiltonian::Epr, g, epr::circuit_state(g, gammas));
        const double max_gamma = gammas.empty() ? 0.0 : *std::max_element(gammas.begin(), gammas.end());
        csv.row({fmt(theta), fmt(max_gamma), fmt(certified), fmt(king), fmt(exact), fmt(upper),
                 fmt(upper > 0.0 ? certified / upper : 1.0)});
    }
    emit(o, out, csv.str());
    return kExitOk;
}

int cmd_sweep_qmc(const Options& o, std::ostream& out, std::ostream& err) {
    resolve_format(o, "csv", {"csv"});
    const Graph g = read_graph_file(o.graph_path);
    const auto kind = qmc::parse_provider_kind(o.provider);
    std::vector<std::string> warnings;
    const auto product = qmc::product_provider(kind, g, o.seed, o.bloch_file, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    std::optional<double> lambda;
    if (g.num_vertices() <= kMaxEigenQubits) lambda = exact_lambda_max(Hamiltonian::Qmc, g);
    report::CsvWriter csv({"theta", "prod", "match", "pmatch", "combined", "chosen", "w_plus_fm",
                           "lambda_max", "observed_ratio"});
    qmc::CombinedOptions opt;
    opt.max_exact_qubits = 0;
    for (double theta : parse_theta_range(o.theta_range).points()) {
        opt.theta = theta;
        const auto rep = qmc::run_combined(g, [&](const Graph&) { return product; }, opt);
        std::string ratio;
        if (lambda) ratio = fmt(*lambda > 0.0 ? rep.combined_energy / *lambda : 1.0);
        csv.row({fmt(theta), fmt(rep.prod_energy), fmt(rep.match_energy), fmt(rep.pmatch_energy),
                 fmt(rep.combined_energy), rep.chosen, fmt(rep.upper_bounds.w_plus_fm),
                 lambda ? fmt(*lambda) : std::string(), ratio});
    }
    emit(o, out, csv.str());
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Matching-based approximation algorithms for Quantum MaxCut and EPR", "qmatch"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", o.seed, "Seed for every randomized component")->default_val(0);
    app.add_option("--out", o.out_path, "Write the result to this file instead of stdout");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    std::function<int()> action;
    auto theta_opt = [&](CLI::App* sub) {
        sub->add_option_function<double>("--theta", [&](double t) { o.theta = t; o.theta_set = true; },
                                         "Angle parameter");
    };

    auto* gen = app.add_subcommand("gen", "Generate a graph in edge-list format");
    gen->add_option("--kind", o.kind, "path|cycle|complete|star|random")->required();
    gen->add_option("--n", o.n, "Vertex count")->required();
    gen->add_option("--weights", o.weights, "unit|uniform");
    gen->add_option("--p", o.p, "Edge probability for random graphs");
    gen->callback([&] { action = [&] { return cmd_gen(o, out); }; });

    auto* epr_cmd = app.add_subcommand("epr", "Run the fractional-matching circuit for EPR");
    epr_cmd->add_option("graph", o.graph_path, "Edge-list file")->required();
    theta_opt(epr_cmd);
    epr_cmd->add_flag("--no-simulate", o.no_simulate, "Skip statevector simulation");
    epr_cmd->callback([&] { action = [&] { return cmd_epr(o, out); }; });

    auto* qmc_cmd = app.add_subcommand("qmc", "Run the combined MATCH/PMATCH algorithm for QMC");
    qmc_cmd->add_option("graph", o.graph_path, "Edge-list file")->required();
    theta_opt(qmc_cmd);
    qmc_cmd->add_option("--provider", o.provider, "zero|file|exact_search|random");
    qmc_cmd->add_option("--bloch-file", o.bloch_file, "Bloch vectors, one 'bx by bz' line per vertex");
    qmc_cmd->callback([&] { action = [&] { return cmd_qmc(o, out, err); }; });

    auto* exact = app.add_subcommand("exact", "Largest eigenvalue by power iteration");
    exact->add_option("graph", o.graph_path, "Edge-list file")->required();
    exact->add_option("--hamiltonian", o.hamiltonian, "qmc|epr|both");
    exact->callback([&] { action = [&] { return cmd_exact(o, out); }; });

    auto* cert = app.add_subcommand("certify", "Numerical approximation-ratio certificates");
    cert->require_subcommand(1);
    auto* cert_epr = cert->add_subcommand("epr", "Minimize the per-edge EPR ratio");
    cert_epr->add_option("--x-grid", o.x_grid, "Grid resolution on [0, 1]");
    cert_epr->callback([&] { action = [&] { return cmd_certify_epr(o, out); }; });
    auto* cert_qmc = cert->add_subcommand("qmc", "Solve the QMC minimax");
    cert_qmc->add_option("graph", o.graph_path, "Edge-list file for --moments-file");
    cert_qmc->add_option("--d", o.d, "Monogamy constant d in (0, 1]");
    cert_qmc->add_option("--theta-grid", o.theta_grid, "Theta resolution");
    cert_qmc->add_option("--mu-grid", o.mu_grid, "Mu resolution");
    cert_qmc->add_option("--s-grid", o.s_grid, "Moment resolution");
    cert_qmc->add_option("--refine-iters", o.refine_iters, "Local refinement rounds");
    cert_qmc->add_option("--moments-file", o.moments_file, "Per-edge moments, lines 'u v s'");
    cert_qmc->callback([&] { action = [&] { return cmd_certify_qmc(o, out); }; });
    auto* cert_b = cert->add_subcommand("appendix-b", "Spot checks of the EPR inequality proof");
    cert_b->callback([&] { action = [&] { return cmd_certify_appendix(o, out); }; });

    auto* verify = app.add_subcommand("verify", "Run the oracle corpus and emit CSV");
    verify->add_option("--manifest", o.manifest, "Corpus manifest (default: bundled corpus)");
    verify->add_option("--provider", o.provider, "zero|exact_search|random");
    theta_opt(verify);
    verify->callback([&] { action = [&] { return cmd_verify(o, out, err); }; });

    auto* sweep = app.add_subcommand("sweep", "Scan theta and emit CSV");
    sweep->require_subcommand(1);
    auto* sweep_epr = sweep->add_subcommand("epr", "Sweep the EPR angle scale");
    sweep_epr->add_option("graph", o.graph_path, "Edge-list file")->required();
    sweep_epr->add_option("--theta", o.theta_range, "start:stop:step")->required();
    sweep_epr->callback([&] { action = [&] { return cmd_sweep_epr(o, out); }; });
    auto* sweep_qmc = sweep->add_subcommand("qmc", "Sweep the PMATCH angle");
    sweep_qmc->add_option("graph", o.graph_path, "Edge-list file")->required();
    sweep_qmc->add_option("--theta", o.theta_range, "start:stop:step")->required();
    sweep_qmc->add_option("--provider", o.provider, "zero|file|exact_search|random");
    sweep_qmc->add_option("--bloch-file", o.bloch_file, "Bloch vectors for the file provider");
    sweep_qmc->callback([&] { action = [&] { return cmd_sweep_qmc(o, out, err); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInput;
    }

    try {
        if (!action) throw InputError("no command given");
        return action();
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InvariantViolation& e) {
        err << "invariant violated: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInvariant;
    }
}

} // namespace qmatch::cli
