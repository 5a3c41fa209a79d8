#include "qmatch/qmc.hpp"

#include "qmatch/error.hpp"
#include "qmatch/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qmatch::qmc {

namespace {

constexpr double kUnitTolerance = 1e-12;

Eigen::Vector3d vec(const BlochVector& b) { return {b.x, b.y, b.z}; }
BlochVector bloch(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }

void check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0))
        throw InputError("theta must lie in [0, pi/2]");
}

BlochVector random_unit(Rng& rng) {
    while (true) {
        BlochVector b{rng.normal(), rng.normal(), rng.normal()};
        double nrm = b.norm();
        if (nrm > 1e-8) return b.scaled(1.0 / nrm);
    }
}

} // namespace

void validate_product_state(const ProductState& p, int n) {
    if (p.blochs.size() != static_cast<std::size_t>(n))
        throw InputError("product state has " + std::to_string(p.blochs.size()) +
                         " vectors for " + std::to_string(n) + " vertices");
    for (std::size_t i = 0; i < p.blochs.size(); ++i)
        if (!p.blochs[i].is_pure(kUnitTolerance))
            throw InputError("product state vector " + std::to_string(i) + " is not unit length");
}

double product_state_energy(const Graph& g, const ProductState& p) {
    double sum = 0.0;
    for (const auto& e : g.edges())
        sum += e.w * product_edge_energy(Hamiltonian::Qmc, p.blochs[e.u], p.blochs[e.v]);
    return sum;
}

BlochMatrix lemma1_bloch_matrix(const BlochVector& bi, const BlochVector& bj, double theta) {
    check_theta(theta);
    if (!bi.is_pure(kUnitTolerance) || !bj.is_pure(kUnitTolerance))
        throw InputError("two-qubit construction requires unit Bloch vectors");
    const Eigen::Vector3d vi = vec(bi);
    const Eigen::Vector3d vj = vec(bj);

    // Frame W with W e1 = b_i and W (t, s, 0) = b_j.
    const double t = std::clamp(vi.dot(vj), -1.0, 1.0);
    Eigen::Vector3d w2 = vj - t * vi;
    w2 -= vi.dot(w2) * vi;
    if (w2.norm() < 1e-14) {
        int k = 0;
        for (int c = 1; c < 3; ++c)
            if (std::abs(vi(c)) < std::abs(vi(k))) k = c;
        w2 = vi.cross(Eigen::Vector3d::Unit(k));
    }
    w2.normalize();
    const double s = w2.dot(vj);
    Eigen::Matrix3d w;
    w.col(0) = vi;
    w.col(1) = w2;
    w.col(2) = vi.cross(w2);

    Eigen::Matrix3d vprime;
    vprime << t, -s, 0.0,
              s, t, 0.0,
              0.0, 0.0, -1.0;
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    const Eigen::Matrix3d sigma = Eigen::Vector3d(1.0, st, st).asDiagonal();
    const Eigen::Vector3d g(ct, 0.0, 0.0);
    const Eigen::Matrix3d u = w;
    const Eigen::Matrix3d v = w * vprime;

    BlochMatrix r;
    r(0, 0) = 1.0;
    r.block<1, 3>(0, 1) = (v * g).transpose();  // second qubit marginal
    r.block<3, 1>(1, 0) = u * g;                // first qubit marginal
    r.block<3, 3>(1, 1) = u * sigma * v.transpose();
    return r;
}

TwoQubitDensity lemma1_state(const BlochVector& bi, const BlochVector& bj, double theta) {
    return bloch_to_density(lemma1_bloch_matrix(bi, bj, theta));
}

Reweighted reweight(const Graph& g, const ProductState& p, double theta) {
    check_theta(theta);
    validate_product_state(p, g.num_vertices());
    const double st = std::sin(theta);
    std::vector<Edge> kept;
    Reweighted out;
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        const auto& e = g.edge(k);
        const double t = p.blochs[e.u].dot(p.blochs[e.v]);
        const double w = e.w * std::max(0.0, st * (1.0 - t * (1.0 + st)) / 2.0);
        if (w > 0.0) {
            kept.push_back({e.u, e.v, w});
            out.origin.push_back(k);
        }
    }
    out.graph = Graph(g.num_vertices(), std::move(kept));
    return out;
}

std::string_view to_string(EdgeClass c) {
    switch (c) {
    case EdgeClass::Matched: return "matched";
    case EdgeClass::S0: return "s0";
    case EdgeClass::S1: return "s1";
    case EdgeClass::S2: return "s2";
    }
    return "?";
}

std::vector<double> assembled_edge_energies(const Graph& g, const PmatchState& s) {
    const int n = g.num_vertices();
    // Marginal Bloch vector of each qubit in the assembled tensor product.
    std::vector<BlochVector> marginal(static_cast<std::size_t>(n));
    std::vector<int> pair_of(static_cast<std::size_t>(g.num_edges()), -1);
    for (std::size_t i = 0; i < s.pair_states.size(); ++i) {
        const auto& [k, rho] = s.pair_states[i];
        pair_of[k] = static_cast<int>(i);
        marginal[g.edge(k).u] = rho.first_marginal();
        marginal[g.edge(k).v] = rho.second_marginal();
    }
    for (const auto& [v, b] : s.singles) marginal[v] = b;

    const Matrix4c term = local_term(Hamiltonian::Qmc);
    std::vector<double> out;
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        const auto& e = g.edge(k);
        if (pair_of[k] >= 0) {
            out.push_back(s.pair_states[pair_of[k]].second.energy(Hamiltonian::Qmc));
        } else {
            out.push_back((term * product_density(marginal[e.u], marginal[e.v])).trace().real());
        }
    }
    return out;
}

PmatchResult run_pmatch(const Graph& g, const ProductState& p, double theta) {
    auto rw = reweight(g, p, theta);
    auto sub = max_weight_matching(rw.graph);

    PmatchResult res;
    res.state.theta = theta;
    res.state.matching.weight = sub.weight;
    for (auto k : sub.edges) res.state.matching.edges.push_back(rw.origin[k]);

    const int n = g.num_vertices();
    std::vector<bool> matched(static_cast<std::size_t>(n), false);
    for (auto k : res.state.matching.edges) {
        const auto& e = g.edge(k);
        matched[e.u] = matched[e.v] = true;
        res.state.pair_states.emplace_back(k, lemma1_state(p.blochs[e.u], p.blochs[e.v], theta));
    }
    for (int v = 0; v < n; ++v)
        if (!matched[v]) res.state.singles.emplace_back(v, p.blochs[v]);

    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    std::vector<bool> in_matching(g.num_edges(), false);
    for (auto k : res.state.matching.edges) in_matching[k] = true;
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        const auto& e = g.edge(k);
        const double t = p.blochs[e.u].dot(p.blochs[e.v]);
        EdgeClass c;
        double energy;
        if (in_matching[k]) {
            c = EdgeClass::Matched;
            energy = (1.0 + st) * (1.0 - t) / 2.0;
        } else {
            int ends = int(matched[e.u]) + int(matched[e.v]);
            c = ends == 0 ? EdgeClass::S0 : ends == 1 ? EdgeClass::S1 : EdgeClass::S2;
            const double scale = ends == 0 ? 1.0 : ends == 1 ? ct : ct * ct;
            energy = (1.0 - t * scale) / 2.0;
        }
        res.classes.push_back(c);
        res.edge_energies.push_back(energy);
        res.energy += e.w * energy;
    }

    auto direct = assembled_edge_energies(g, res.state);
    for (std::size_t k = 0; k < direct.size(); ++k)
        if (std::abs(direct[k] - res.edge_energies[k]) > 1e-10)
            throw InvariantViolation("PMATCH edge " + std::to_string(k) +
                                     " analytic energy disagrees with its marginal trace");
    return res;
}

MatchResult run_match(const Graph& g) {
    MatchResult res;
    res.matching = max_weight_matching(g);
    std::vector<bool> in(g.num_edges(), false);
    for (auto k : res.matching.edges) in[k] = true;
    for (std::size_t k = 0; k < g.num_edges(); ++k) res.edge_energies.push_back(in[k] ? 2.0 : 0.5);
    res.energy = (3.0 * res.matching.weight + total_weight(g)) / 2.0;
    return res;
}

ProviderKind parse_provider_kind(std::string_view s) {
    if (s == "zero") return ProviderKind::Zero;
    if (s == "file") return ProviderKind::File;
    if (s == "exact_search") return ProviderKind::ExactSearch;
    if (s == "random") return ProviderKind::Random;
    throw InputError("unknown provider '" + std::string(s) + "'");
}

std::string to_string(ProviderKind k) {
    switch (k) {
    case ProviderKind::Zero: return "zero";
    case ProviderKind::File: return "file";
    case ProviderKind::ExactSearch: return "exact_search";
    case ProviderKind::Random: return "random";
    }
    return "?";
}

ProductState parse_bloch_file(std::string_view text, int n, std::vector<std::string>* warnings) {
    ProductState out;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        std::istringstream fields(raw);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() != 3)
            throw InputError("bloch file line " + std::to_string(line_no) + ": expected 'bx by bz'");
        double c[3];
        for (int i = 0; i < 3; ++i) {
            try {
                std::size_t used = 0;
                c[i] = std::stod(tok[i], &used);
                if (used != tok[i].size() || !std::isfinite(c[i])) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw InputError("bloch file line " + std::to_string(line_no) + ": bad number '" +
                                 tok[i] + "'");
            }
        }
        BlochVector b{c[0], c[1], c[2]};
        double nrm = b.norm();
        if (std::abs(nrm - 1.0) > 1e-6)
            throw InputError("bloch file line " + std::to_string(line_no) +
                             ": vector is not unit length");
        if (std::abs(nrm - 1.0) > kUnitTolerance) {
            b = b.scaled(1.0 / nrm);
            if (warnings)
                warnings->push_back("bloch file line " + std::to_string(line_no) +
                                    ": renormalized vector");
        }
        out.blochs.push_back(b);
    }
    if (out.blochs.size() != static_cast<std::size_t>(n))
        throw InputError("bloch file has " + std::to_string(out.blochs.size()) +
                         " vectors, graph has " + std::to_string(n) + " vertices");
    return out;
}

ProductState exact_search_product(const Graph& g, std::uint64_t seed,
                                  const ExactSearchOptions& opt) {
    const int n = g.num_vertices();
    ProductState best;
    double best_energy = -1.0;
    for (int start = 0; start < opt.starts; ++start) {
        Rng rng(seed * 0x100000001b3ULL + static_cast<std::uint64_t>(start));
        ProductState cur;
        for (int v = 0; v < n; ++v) cur.blochs.push_back(random_unit(rng));
        for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
            double change = 0.0;
            for (int v = 0; v < n; ++v) {
                Eigen::Vector3d field = Eigen::Vector3d::Zero();
                for (auto k : g.incident(v)) {
                    const auto& e = g.edge(k);
                    field += e.w * vec(cur.blochs[e.u == v ? e.v : e.u]);
                }
                double fn = field.norm();
                if (fn < 1e-15) continue;
                BlochVector next = bloch(-field / fn);
                change = std::max(change, (vec(next) - vec(cur.blochs[v])).norm());
                cur.blochs[v] = next;
            }
            if (change < opt.tolerance) break;
        }
        double energy = product_state_energy(g, cur);
        if (energy > best_energy) {
            best_energy = energy;
            best = std::move(cur);
        }
    }
    return best;
}

ProductState product_provider(ProviderKind kind, const Graph& g, std::uint64_t seed,
                              const std::string& bloch_file, std::vector<std::string>* warnings) {
    const int n = g.num_vertices();
    ProductState out;
    switch (kind) {
    case ProviderKind::Zero:
        out.blochs.assign(static_cast<std::size_t>(n), BlochVector{0.0, 0.0, 1.0});
        break;
    case ProviderKind::Random: {
        Rng rng(seed);
        for (int v = 0; v < n; ++v) out.blochs.push_back(random_unit(rng));
        break;
    }
    case ProviderKind::ExactSearch:
        out = exact_search_product(g, seed);
        break;
    case ProviderKind::File: {
        if (bloch_file.empty()) throw InputError("file provider requires a Bloch-vector file");
        std::ifstream f(bloch_file);
        if (!f) throw InputError("cannot open bloch file '" + bloch_file + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        out = parse_bloch_file(ss.str(), n, warnings);
        break;
    }
    }
    validate_product_state(out, n);
    return out;
}

ProductStateProvider make_provider(ProviderKind kind, std::uint64_t seed, std::string bloch_file,
                                   std::vector<std::string>* warnings) {
    return [=](const Graph& g) { return product_provider(kind, g, seed, bloch_file, warnings); };
}

Report run_combined(const Graph& g, const ProductStateProvider& provider,
                    const CombinedOptions& opt) {
    check_theta(opt.theta);
    Report rep;
    rep.theta = opt.theta;
    rep.product = provider(g);
    validate_product_state(rep.product, g.num_vertices());
    rep.prod_energy = product_state_energy(g, rep.product);
    rep.match = run_match(g);
    rep.pmatch = run_pmatch(g, rep.product, opt.theta);
    rep.match_energy = rep.match.energy;
    rep.pmatch_energy = rep.pmatch.energy;
    rep.chosen = rep.pmatch_energy > rep.match_energy ? "pmatch" : "match";
    rep.combined_energy = std::max(rep.match_energy, rep.pmatch_energy);

    rep.total_weight = total_weight(g);
    rep.max_matching = rep.match.matching.weight;
    rep.max_fractional_matching = max_weight_fractional_matching(g).weight;
    rep.upper_bounds.w_plus_fm = rep.total_weight + rep.max_fractional_matching;
    rep.upper_bounds.w_plus_m_over_d = rep.total_weight + rep.max_matching / kStrengthenedD;
    if (rep.combined_energy > rep.upper_bounds.w_plus_fm + 1e-9)
        throw InvariantViolation("combined energy exceeds the W + FM monogamy bound");

    if (g.num_vertices() <= opt.max_exact_qubits) {
        double lam = exact_lambda_max(Hamiltonian::Qmc, g);
        rep.exact_lambda_max = lam;
        rep.observed_ratio = lam > 0.0 ? rep.combined_energy / lam : 1.0;
    }
    return rep;
}

} // namespace qmatch::qmc
