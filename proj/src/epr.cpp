#include "qmatch/epr.hpp"

#include "qmatch/error.hpp"

#include <cmath>

namespace qmatch::epr {

std::vector<double> compute_gammas(std::span<const double> fractional_values, double theta) {
    std::vector<double> out;
    out.reserve(fractional_values.size());
    for (double m : fractional_values) out.push_back(0.5 * std::acos(std::exp(-theta * m)));
    return out;
}

double edge_bound_T(double theta, double m) {
    const double a = std::exp(-theta * (1.0 - m));
    const double s = std::sqrt(std::max(0.0, 1.0 - std::exp(-2.0 * theta * m)));
    return 0.5 * (1.0 + a * a + 2.0 * s * a);
}

double king_edge_bound(const Graph& g, std::span<const double> gammas, std::size_t edge) {
    const auto& e = g.edge(edge);
    auto side = [&](Vertex x) {
        double prod = 1.0;
        for (auto k : g.incident(x))
            if (k != edge) prod *= std::cos(2.0 * gammas[k]);
        return prod;
    };
    const double a = side(e.u);
    const double b = side(e.v);
    return 0.5 * (1.0 + a * b + std::sin(2.0 * gammas[edge]) * (a + b));
}

StateVector circuit_state(const Graph& g, std::span<const double> gammas,
                          std::span<const std::size_t> order) {
    if (gammas.size() != g.num_edges()) throw InputError("one angle per edge required");
    StateVector psi(g.num_vertices());
    if (order.empty()) {
        for (std::size_t k = 0; k < g.num_edges(); ++k)
            apply_edge_rotation_inplace(psi, g.edge(k).u, g.edge(k).v, gammas[k]);
    } else {
        if (order.size() != g.num_edges()) throw InputError("edge order must list every edge");
        for (auto k : order) apply_edge_rotation_inplace(psi, g.edge(k).u, g.edge(k).v, gammas[k]);
    }
    return psi;
}

Report run(const Graph& g, const RunConfig& cfg) {
    if (!(cfg.theta > 0.0)) throw InputError("theta must be positive");
    Report rep;
    rep.fractional = max_weight_fractional_matching(g);
    rep.gammas = compute_gammas(rep.fractional.values, cfg.theta);
    rep.total_weight = total_weight(g);
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        const double w = g.edge(k).w;
        rep.edge_certified.push_back(edge_bound_T(cfg.theta, rep.fractional.values[k]));
        rep.edge_king_bound.push_back(king_edge_bound(g, rep.gammas, k));
        rep.certified_lower_bound += w * rep.edge_certified.back();
        rep.king_lower_bound += w * rep.edge_king_bound.back();
    }
    rep.upper_bound = rep.total_weight + rep.fractional.weight;
    rep.ratio_certified = rep.upper_bound > 0.0 ? rep.certified_lower_bound / rep.upper_bound : 1.0;

    if (cfg.simulate_exact && g.num_vertices() <= cfg.max_sim_qubits &&
        g.num_vertices() <= StateVector::kMaxQubits) {
        auto psi = circuit_state(g, rep.gammas);
        auto per_edge = edge_energies(Hamiltonian::Epr, g, psi);
        double sum = 0.0;
        for (std::size_t k = 0; k < per_edge.size(); ++k) sum += g.edge(k).w * per_edge[k];
        rep.exact_energy = sum;
        rep.exact_edge_energies = std::move(per_edge);
        if (sum < rep.certified_lower_bound - 1e-9)
            throw InvariantViolation("simulated EPR energy is below the certified bound");
    }
    return rep;
}

} // namespace qmatch::epr
