// Acceptance suite: one PASS/FAIL line per criterion.

#include "oracles.hpp"

#include "qmatch/certify.hpp"
#include "qmatch/cli.hpp"
#include "qmatch/epr.hpp"
#include "qmatch/oracle.hpp"
#include "qmatch/qmc.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>

using namespace qmatch;

namespace {

const double kPhi = std::numbers::phi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "] ";
        }
    }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

Outcome criterion1() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto c = certify::certify_epr_min();
    const double elapsed = seconds_since(t0);
    const double target = (1.0 + std::sqrt(5.0)) / 4.0;
    o.require(std::abs(c.minimum - target) <= 1e-8, "minimum within 1e-8 of (1+sqrt5)/4");
    o.require(c.argmin == 0.0 || c.argmin == 1.0, "argmin at an endpoint");
    o.require(c.interior_minimum >= target - 1e-8, "no interior point below the target");
    o.require(elapsed < 1.0, "runtime under 1 s");
    o.detail << "min=" << g17(c.minimum) << " argmin=" << c.argmin << " time=" << g17(elapsed) << "s";
    return o;
}

Outcome criterion2() {
    Outcome o;
    const auto t0 = Clock::now();
    certify::CertifyConfig cfg;
    cfg.d = 14.0 / 15.0;
    const auto a = certify::certify_qmc_ratio(cfg);
    cfg.d = 1.0;
    const auto b = certify::certify_qmc_ratio(cfg);
    const double elapsed = seconds_since(t0);
    const double half_pi = std::numbers::pi / 2;
    o.require(a.alpha >= 0.611, "alpha(14/15) >= 0.611");
    o.require(std::abs(a.argmax_theta - 1.286) <= 0.01, "theta(14/15) within 0.01 of 1.286");
    o.require(std::abs(a.argmax_mu - 0.861) <= 0.01, "mu(14/15) within 0.01 of 0.861");
    o.require(b.alpha >= 0.614, "alpha(1) >= 0.614");
    o.require(std::abs(b.argmax_theta - 1.288) <= 0.01, "theta(1) within 0.01 of 1.288");
    o.require(std::abs(b.argmax_mu - 0.881) <= 0.01, "mu(1) within 0.01 of 0.881");
    o.require(elapsed < 60.0, "runtime under 60 s");
    o.detail << "d=14/15: alpha=" << g17(a.alpha) << " theta=" << g17(a.argmax_theta)
             << " (pi/2-theta=" << g17(half_pi - a.argmax_theta) << ") mu=" << g17(a.argmax_mu)
             << "; d=1: alpha=" << g17(b.alpha) << " theta=" << g17(b.argmax_theta)
             << " (pi/2-theta=" << g17(half_pi - b.argmax_theta) << ") mu=" << g17(b.argmax_mu)
             << " time=" << g17(elapsed) << "s";
    return o;
}

Outcome criterion3() {
    Outcome o;
    const auto g = oracles::path3();
    const double lq = exact_lambda_max(Hamiltonian::Qmc, g);
    const double le = exact_lambda_max(Hamiltonian::Epr, g);
    o.require(std::abs(lq - 3.0) <= 1e-8 && std::abs(le - 3.0) <= 1e-8, "lambda_max = 3 for both");

    const auto zero = qmc::product_provider(qmc::ProviderKind::Zero, g, 0);
    double prod = 0.0;
    for (const auto& e : g.edges())
        prod += e.w * product_edge_energy(Hamiltonian::Epr, zero.blochs[e.u], zero.blochs[e.v]);
    o.require(std::abs(prod - 2.0) <= 1e-12, "PROD(zero) energy = 2");

    const double match = qmc::run_match(g).energy;
    o.require(match == 2.5, "MATCH = 5/2");

    const std::vector<double> gammas{0.554, 0.0};
    const double sim = hamiltonian_energy(Hamiltonian::Epr, g, epr::circuit_state(g, gammas));
    o.require(std::abs(sim - 2.618) <= 1e-3, "circuit energy 2.618 +- 1e-3");

    const auto r = epr::run(g);
    o.require(std::abs(r.certified_lower_bound - (kPhi + kPhi / 2)) <= 1e-9, "certified = phi + phi/2");
    o.require(r.certified_lower_bound / le >= 0.809, "certified ratio >= 0.809");
    o.detail << "lambda=" << g17(lq) << "/" << g17(le) << " prod=" << g17(prod) << " match=" << g17(match)
             << " circuit=" << g17(sim) << " certified=" << g17(r.certified_lower_bound)
             << " ratio=" << g17(r.certified_lower_bound / le);
    return o;
}

Outcome criterion4() {
    Outcome o;
    const auto g = oracles::single_edge();
    const auto r = epr::run(g);
    const double le = exact_lambda_max(Hamiltonian::Epr, g);
    const double lq = exact_lambda_max(Hamiltonian::Qmc, g);
    o.require(std::abs(r.certified_lower_bound - kPhi) <= 1e-9, "EPR certified = phi");
    o.require(r.exact_energy && std::abs(*r.exact_energy - kPhi) <= 1e-9, "EPR simulated = phi");
    o.require(std::abs(le - 2.0) <= 1e-9, "EPR lambda_max = 2");
    o.require(std::abs(r.certified_lower_bound / le - kPhi / 2) <= 1e-12, "ratio phi/2");
    const auto q = qmc::run_combined(g, qmc::make_provider(qmc::ProviderKind::ExactSearch, 0));
    o.require(std::abs(q.combined_energy - 2.0) <= 1e-12 && std::abs(lq - 2.0) <= 1e-9,
              "QMC combined = 2 = lambda_max");
    o.detail << "epr certified=" << g17(r.certified_lower_bound) << " simulated="
             << g17(r.exact_energy.value_or(-1)) << " lambda=" << g17(le) << " qmc combined="
             << g17(q.combined_energy) << " lambda=" << g17(lq);
    return o;
}

Outcome criterion5() {
    Outcome o;
    Rng rng(5005);
    double worst_purity = 0, worst_min_eig = 0, worst_marginal = 0, worst_energy = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto a = oracles::random_unit(rng);
        const auto b = oracles::random_unit(rng);
        const double theta = rng.uniform(0.0, std::numbers::pi / 2);
        const auto rho = qmc::lemma1_state(a, b, theta);
        worst_purity = std::max(worst_purity, std::abs(rho.purity() - 1.0));
        worst_min_eig = std::min(worst_min_eig, rho.min_eigenvalue());
        const auto ma = rho.first_marginal(), mb = rho.second_marginal();
        const double c = std::cos(theta);
        worst_marginal = std::max({worst_marginal, std::hypot(ma.x - c * a.x, ma.y - c * a.y, ma.z - c * a.z),
                                   std::hypot(mb.x - c * b.x, mb.y - c * b.y, mb.z - c * b.z)});
        const double direct = (oracles::dense_local_term(Hamiltonian::Qmc) * rho.matrix()).trace().real();
        worst_energy = std::max(worst_energy, std::abs(direct - (1 + std::sin(theta)) * (1 - a.dot(b)) / 2));
    }
    o.require(worst_purity <= 1e-10, "purity");
    o.require(worst_min_eig >= -1e-10, "PSD");
    o.require(worst_marginal <= 1e-10, "marginals rescaled by cos(theta)");
    o.require(worst_energy <= 1e-10, "energy formula");
    o.detail << "max|purity-1|=" << g17(worst_purity) << " min eig=" << g17(worst_min_eig)
             << " max marginal err=" << g17(worst_marginal) << " max energy err=" << g17(worst_energy);
    return o;
}

Outcome criterion6() {
    Outcome o;
    Rng rng(6006);
    double worst_perm = 0.0, worst_slack = 1e300;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 9);
        const auto g = oracles::random_graph(rng, n, 0.2 + 0.7 * rng.uniform(), trial % 2 == 0);
        const auto fm = max_weight_fractional_matching(g);
        const auto gammas = epr::compute_gammas(fm.values, epr::kDefaultTheta);
        std::vector<std::size_t> order(g.num_edges());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t k = order.size(); k > 1; --k)
            std::swap(order[k - 1], order[static_cast<std::size_t>(rng.uniform() * static_cast<double>(k))]);
        const auto a = epr::circuit_state(g, gammas);
        const auto b = epr::circuit_state(g, gammas, order);
        for (std::size_t i = 0; i < a.amplitudes().size(); ++i)
            worst_perm = std::max(worst_perm, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
        double bound = 0.0;
        for (std::size_t k = 0; k < g.num_edges(); ++k)
            bound += g.edge(k).w * epr::edge_bound_T(epr::kDefaultTheta, fm.values[k]);
        const double exact = hamiltonian_energy(Hamiltonian::Epr, g, a);
        worst_slack = std::min(worst_slack, exact - bound);
    }
    o.require(worst_perm < 1e-12, "edge-order permutation changes state by < 1e-12");
    o.require(worst_slack >= -1e-9, "exact energy >= sum w T - 1e-9");
    o.detail << "max permutation diff=" << g17(worst_perm) << " min (exact - bound)=" << g17(worst_slack);
    return o;
}

struct CorpusRun {
    std::vector<oracle::CorpusRow> rows;
    double seconds = 0.0;
};

const CorpusRun& corpus() {
    static const CorpusRun run = [] {
        CorpusRun r;
        const auto t0 = Clock::now();
        r.rows = oracle::run_corpus(oracle::read_corpus_manifest(oracle::default_corpus_path()), 0,
                                    qmc::ProviderKind::ExactSearch);
        r.seconds = seconds_since(t0);
        return r;
    }();
    return run;
}

Outcome criterion7() {
    Outcome o;
    const auto& c = corpus();
    std::size_t fm_violations = 0, md_violations = 0;
    int max_n = 0;
    for (const auto& r : c.rows) {
        if (!r.monogamy.fm_bound_qmc || !r.monogamy.fm_bound_epr) ++fm_violations;
        if (!r.monogamy.md_bound_qmc) ++md_violations;
        max_n = std::max(max_n, r.n);
    }
    o.require(fm_violations == 0, "no W+FM violations");
    o.require(md_violations == 0, "no W+M/d violations");
    o.require(max_n <= 10, "corpus n <= 10");
    o.require(c.seconds < 600.0, "runtime under 10 min");
    o.detail << "instances=" << c.rows.size() << " W+FM violations=" << fm_violations << " W+M/d violations=" << md_violations
             << " time=" << g17(c.seconds) << "s";
    return o;
}

Outcome criterion8() {
    Outcome o;
    const double pts[] = {-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0};
    double worst_z = 0.0;
    std::uint64_t seed = 8008;
    for (double s : pts) {
        const auto mc = certify::F_monte_carlo(s, 1000000, seed++);
        const double f = certify::F(s);
        const double diff = std::abs(f - mc.mean);
        const double allowed = std::max(3.0 * mc.standard_error, 1e-12);
        o.require(diff <= allowed, "F(" + g17(s) + ") within 3 standard errors");
        if (mc.standard_error > 0) worst_z = std::max(worst_z, diff / mc.standard_error);
        o.detail << "F(" << s << ")=" << g17(f) << " mc=" << g17(mc.mean) << "+-" << g17(mc.standard_error) << "; ";
    }
    o.require(std::abs(certify::F(0.0)) <= 1e-10, "F(0) = 0");
    o.require(std::abs(certify::F(1.0) - 1.0) <= 1e-10 && std::abs(certify::F(-1.0) + 1.0) <= 1e-10, "F(+-1) = +-1");
    o.detail << "max |z|=" << g17(worst_z);
    return o;
}

Outcome criterion9() {
    Outcome o;
    const auto& c = corpus();
    const auto s = oracle::summarize(c.rows);
    o.require(s.chain_violations == 0, "3M >= FM chain on the corpus");
    o.require(s.min_qmc_ratio >= 0.5, "min QMC ratio >= 0.5 (hard floor)");
    for (const auto& r : c.rows) {
        const auto& m = r.monogamy;
        const double match = (3 * m.max_matching + m.total_weight) / 2;
        o.require(match >= m.fm_bound / 2 - 1e-9, "MATCH >= (W+FM)/2 on " + r.name);
    }
    o.detail << "min QMC ratio=" << g17(s.min_qmc_ratio) << " on " << s.min_qmc_instance
             << " instances below 0.611: " << s.below_target.size();
    for (const auto& name : s.below_target) o.detail << " finding:" << name;
    return o;
}

std::string capture(const std::vector<std::string>& args, int& code) {
    std::ostringstream out, err;
    code = cli::run_cli(args, out, err);
    return out.str() + "\x1e" + err.str();
}

std::string run_process(const std::string& cmd) {
    std::string text;
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    if (!pipe) return "popen failed";
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) text.append(buf.data(), got);
    return text;
}

Outcome criterion10() {
    Outcome o;
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "qmatch_acceptance";
    fs::create_directories(dir);
    const auto graph = (dir / "g.txt").string();
    const auto p3 = (dir / "p3.txt").string();
    const auto manifest = (dir / "mini.txt").string();
    const auto bloch = (dir / "p3.bloch").string();
    const auto moments = (dir / "p3.moments").string();
    std::ofstream(p3) << "0 1 1\n1 2 1\n";
    std::ofstream(manifest) << "path 4 0 unit\nrandom 6 2 uniform 0.5\n";
    std::ofstream(bloch) << "0 0 1\n0 0 -1\n0 0 1\n";
    std::ofstream(moments) << "0 1 -1\n1 2 -0.2\n";
    int code = 0;
    capture({"gen", "--kind", "random", "--n", "7", "--seed", "11", "--weights", "uniform", "--out", graph}, code);

    const std::vector<std::vector<std::string>> commands{
        {"gen", "--kind", "random", "--n", "9", "--seed", "5", "--weights", "uniform", "--p", "0.4"},
        {"gen", "--kind", "cycle", "--n", "6"},
        {"epr", graph, "--seed", "3"},
        {"epr", graph, "--format", "csv", "--theta", "0.5"},
        {"qmc", graph, "--provider", "exact_search", "--seed", "7"},
        {"qmc", graph, "--provider", "random", "--seed", "7"},
        {"qmc", graph, "--provider", "zero", "--format", "csv"},
        {"qmc", p3, "--provider", "file", "--bloch-file", bloch},
        {"exact", graph},
        {"certify", "epr"},
        {"certify", "qmc", "--d", "0.9333333333333333"},
        {"certify", "qmc", p3, "--moments-file", moments, "--theta-grid", "0.01", "--mu-grid", "0.01"},
        {"certify", "appendix-b"},
        {"verify", "--manifest", manifest, "--seed", "1"},
        {"sweep", "epr", p3, "--theta", "0:1.2:0.01"},
        {"sweep", "qmc", graph, "--theta", "0:1.5:0.05", "--provider", "random", "--seed", "9"},
    };
    std::size_t identical = 0;
    for (const auto& args : commands) {
        int c1 = 0, c2 = 0;
        const auto a = capture(args, c1);
        const auto b = capture(args, c2);
        if (a == b && c1 == c2 && c1 == 0) ++identical;
        else o.require(false, "in-process repeat of '" + args[0] + " " + args[1] + "'");
    }
    std::size_t process_identical = 0;
    const std::string exe = QMATCH_CLI_PATH;
    for (const std::string& tail : {std::string("qmc ") + graph + " --provider random --seed 13",
                                    std::string("verify --manifest ") + manifest,
                                    std::string("sweep epr ") + p3 + " --theta 0:1.2:0.01"}) {
        const auto a = run_process(exe + " " + tail + " 2>&1");
        const auto b = run_process(exe + " " + tail + " 2>&1");
        if (a == b && !a.empty()) ++process_identical;
        else o.require(false, "process repeat of '" + tail + "'");
    }
    o.detail << identical << "/" << commands.size() << " in-process commands identical, " << process_identical
             << "/3 process runs identical";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"EPR ratio certificate", criterion1},
        {"QMC ratio certificate", criterion2},
        {"Path-of-three worked example", criterion3},
        {"Single-edge instances", criterion4},
        {"Two-qubit construction property suite", criterion5},
        {"Circuit invariants", criterion6},
        {"Monogamy suite on the corpus", criterion7},
        {"F oracle agreement", criterion8},
        {"Empirical end-to-end ratio", criterion9},
        {"Determinism", criterion10},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (k + 1) << "] " << criteria[k].first << ": "
                  << o.detail.str() << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
