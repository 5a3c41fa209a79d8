#include "qmatch/oracle.hpp"

#include "qmatch/epr.hpp"
#include "qmatch/error.hpp"
#include "qmatch/matching.hpp"
#include "qmatch/quantum.hpp"
#include "qmatch/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#ifndef QMATCH_DATA_DIR
#define QMATCH_DATA_DIR "data"
#endif

namespace qmatch::oracle {

namespace {

void check_size(const Graph& g) {
    if (g.num_vertices() > kMaxOracleVertices)
        throw InstanceTooLarge("oracle supports at most " + std::to_string(kMaxOracleVertices) +
                               " vertices");
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 1.0; }

} // namespace

MonogamyReport verify_monogamy(const Graph& g) {
    check_size(g);
    MonogamyReport r;
    r.lambda_qmc = exact_lambda_max(Hamiltonian::Qmc, g);
    r.lambda_epr = exact_lambda_max(Hamiltonian::Epr, g);
    r.total_weight = total_weight(g);
    r.max_matching = max_weight_matching(g).weight;
    r.max_fractional_matching = max_weight_fractional_matching(g).weight;
    r.fm_bound = r.total_weight + r.max_fractional_matching;
    r.md_bound = r.total_weight + r.max_matching / qmc::kStrengthenedD;
    r.fm_bound_qmc = r.lambda_qmc <= r.fm_bound + kMonogamyTolerance;
    r.fm_bound_epr = r.lambda_epr <= r.fm_bound + kMonogamyTolerance;
    r.md_bound_qmc = r.lambda_qmc <= r.md_bound + kMonogamyTolerance;
    const double tol = kLpTolerance * std::max(1.0, r.max_matching);
    r.matching_chain = r.max_matching <= r.max_fractional_matching + tol &&
                       r.max_fractional_matching <= 1.5 * r.max_matching + tol &&
                       3.0 * r.max_matching >= r.max_fractional_matching - tol;
    return r;
}

EndToEnd end_to_end_ratio(const Graph& g, std::uint64_t seed, qmc::ProviderKind provider,
                          double qmc_theta) {
    check_size(g);
    EndToEnd out;
    const auto epr_report = epr::run(g);
    out.epr_certified = epr_report.certified_lower_bound;
    out.epr_exact = epr_report.exact_energy.value_or(0.0);
    out.epr_lambda = exact_lambda_max(Hamiltonian::Epr, g);
    out.epr_certified_ratio = safe_ratio(out.epr_certified, out.epr_lambda);
    out.epr_exact_ratio = safe_ratio(out.epr_exact, out.epr_lambda);

    qmc::CombinedOptions opt;
    opt.theta = qmc_theta;
    out.qmc = qmc::run_combined(g, qmc::make_provider(provider, seed), opt);
    out.qmc_ratio = out.qmc.observed_ratio.value_or(1.0);
    out.min_ratio = std::min(out.epr_exact_ratio, out.qmc_ratio);
    return out;
}

std::vector<CorpusEntry> parse_corpus_manifest(std::string_view text) {
    std::vector<CorpusEntry> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        std::istringstream fields(raw);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string where = "manifest line " + std::to_string(line_no) + ": ";
        if (tok.size() != 4 && tok.size() != 5)
            throw InputError(where + "expected 'kind n seed weights [p]'");
        CorpusEntry e;
        try {
            e.spec.kind = parse_graph_kind(tok[0]);
            e.spec.weights = parse_weight_mode(tok[3]);
        } catch (const InputError& err) {
            throw InputError(where + err.what());
        }
        try {
            std::size_t a = 0, b = 0;
            e.spec.n = std::stoi(tok[1], &a);
            e.spec.seed = std::stoull(tok[2], &b);
            if (a != tok[1].size() || b != tok[2].size()) throw std::invalid_argument("");
            if (tok.size() == 5) {
                std::size_t c = 0;
                e.spec.edge_probability = std::stod(tok[4], &c);
                if (c != tok[4].size()) throw std::invalid_argument("");
            }
        } catch (const std::exception&) {
            throw InputError(where + "malformed number");
        }
        if (tok.size() == 5 && e.spec.kind != GraphKind::Random)
            throw InputError(where + "edge probability only applies to random graphs");
        e.name = tok[0] + "_n" + tok[1] + "_s" + tok[2] + "_" + tok[3] + (tok.size() == 5 ? "_p" + tok[4] : "");
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<CorpusEntry> read_corpus_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open manifest '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_corpus_manifest(ss.str());
}

std::string default_corpus_path() { return std::string(QMATCH_DATA_DIR) + "/corpus.txt"; }

std::vector<CorpusRow> run_corpus(const std::vector<CorpusEntry>& entries, std::uint64_t seed,
                                  qmc::ProviderKind provider, double qmc_theta) {
    std::vector<CorpusRow> rows;
    for (const auto& e : entries) {
        const Graph g = generate(e.spec);
        CorpusRow row;
        row.name = e.name;
        row.n = g.num_vertices();
        row.m = g.num_edges();
        row.monogamy = verify_monogamy(g);
        row.ratios = end_to_end_ratio(g, seed, provider, qmc_theta);
        rows.push_back(std::move(row));
    }
    return rows;
}

CorpusSummary summarize(const std::vector<CorpusRow>& rows) {
    CorpusSummary s;
    s.instances = rows.size();
    for (const auto& r : rows) {
        const auto& m = r.monogamy;
        if (!(m.fm_bound_qmc && m.fm_bound_epr && m.md_bound_qmc)) ++s.monogamy_violations;
        if (!m.matching_chain) ++s.chain_violations;
        if (r.ratios.qmc_ratio < s.min_qmc_ratio || s.min_qmc_instance.empty()) {
            s.min_qmc_ratio = r.ratios.qmc_ratio;
            s.min_qmc_instance = r.name;
        }
        s.min_epr_certified_ratio = std::min(s.min_epr_certified_ratio, r.ratios.epr_certified_ratio);
        if (r.ratios.qmc_ratio < 0.611) s.below_target.push_back(r.name);
    }
    return s;
}

std::string corpus_csv(const std::vector<CorpusRow>& rows) {
    report::CsvWriter csv({"instance", "n", "m", "W", "M", "FM", "lambda_qmc", "lambda_epr",
                           "fm_bound_qmc", "fm_bound_epr", "md_bound_qmc", "matching_chain",
                           "epr_certified", "epr_exact", "epr_certified_ratio", "epr_exact_ratio",
                           "qmc_prod", "qmc_match", "qmc_pmatch", "qmc_combined", "qmc_chosen",
                           "qmc_ratio"});
    for (const auto& r : rows) {
        const auto& m = r.monogamy;
        const auto& e = r.ratios;
        csv.row({r.name, std::to_string(r.n), std::to_string(r.m), report::fmt(m.total_weight),
                 report::fmt(m.max_matching), report::fmt(m.max_fractional_matching),
                 report::fmt(m.lambda_qmc), report::fmt(m.lambda_epr), report::fmt(m.fm_bound_qmc),
                 report::fmt(m.fm_bound_epr), report::fmt(m.md_bound_qmc), report::fmt(m.matching_chain),
                 report::fmt(e.epr_certified), report::fmt(e.epr_exact),
                 report::fmt(e.epr_certified_ratio), report::fmt(e.epr_exact_ratio),
                 report::fmt(e.qmc.prod_energy), report::fmt(e.qmc.match_energy),
                 report::fmt(e.qmc.pmatch_energy), report::fmt(e.qmc.combined_energy), e.qmc.chosen,
                 report::fmt(e.qmc_ratio)});
    }
    return csv.str();
}

} // namespace qmatch::oracle
