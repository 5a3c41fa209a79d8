#pragma once

#include "qmatch/graph.hpp"
#include "qmatch/matching.hpp"
#include "qmatch/quantum.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace qmatch::epr {

inline constexpr double kGoldenRatio = std::numbers::phi;
/// ln(phi)/2, the angle scale for which T(theta, m)/(1+m) >= phi/2.
inline const double kDefaultTheta = std::log(std::numbers::phi) / 2.0;

struct RunConfig {
    double theta = kDefaultTheta;
    bool simulate_exact = true;
    int max_sim_qubits = StateVector::kMaxQubits;
};

struct Report {
    FractionalMatching fractional;
    std::vector<double> gammas;           // canonical edge order
    std::vector<double> edge_certified;   // T(theta, m_e)
    std::vector<double> edge_king_bound;  // neighborhood-product bound
    double certified_lower_bound = 0.0;   // sum w_e T(theta, m_e)
    double king_lower_bound = 0.0;        // sum w_e king_edge_bound
    std::optional<double> exact_energy;
    std::optional<std::vector<double>> exact_edge_energies;
    double total_weight = 0.0;
    double upper_bound = 0.0;             // W + FM
    double ratio_certified = 1.0;
};

/// gamma_e = arccos(exp(-theta m_e)) / 2.
std::vector<double> compute_gammas(std::span<const double> fractional_values, double theta);

/// Per-edge energy guarantee T(theta, m).
double edge_bound_T(double theta, double m);

/// (1 + A B + sin(2 gamma_ij)(A + B))/2 with A, B the products of cos(2 gamma)
/// over the other edges at i and at j.
double king_edge_bound(const Graph& g, std::span<const double> gammas, std::size_t edge);

/// Product of exp(i gamma_e P_u P_v) over edges applied to |0...0>, in the
/// given edge order (canonical when empty).
StateVector circuit_state(const Graph& g, std::span<const double> gammas,
                          std::span<const std::size_t> order = {});

Report run(const Graph& g, const RunConfig& cfg = {});

} // namespace qmatch::epr
