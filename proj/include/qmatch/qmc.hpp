#pragma once

#include "qmatch/graph.hpp"
#include "qmatch/matching.hpp"
#include "qmatch/quantum.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qmatch::qmc {

/// Entangling angle used by the combined algorithm unless overridden.
inline constexpr double kDefaultTheta = 1.286;
/// Strengthened monogamy constant d in lambda_max <= W + M/d.
inline constexpr double kStrengthenedD = 14.0 / 15.0;

struct ProductState {
    std::vector<BlochVector> blochs;  // one unit vector per vertex
};

/// Throws InputError unless there is one unit (1e-12) vector per vertex.
void validate_product_state(const ProductState& p, int n);

/// sum_e w_e (1 - b_u.b_v)/2.
double product_state_energy(const Graph& g, const ProductState& p);

/// Bloch matrix of the pure two-qubit state whose marginals are cos(theta) b_i
/// and cos(theta) b_j and whose correlation block has singular values
/// (1, sin theta, sin theta). Throws InputError for non-unit inputs or theta
/// outside [0, pi/2].
BlochMatrix lemma1_bloch_matrix(const BlochVector& bi, const BlochVector& bj, double theta);

TwoQubitDensity lemma1_state(const BlochVector& bi, const BlochVector& bj, double theta);

struct Reweighted {
    Graph graph;                      // edges with positive rescaled weight only
    std::vector<std::size_t> origin;  // reweighted edge index -> original index
};

/// w_e sin(theta)(1 - t_e (1 + sin theta))/2, clamped at zero, dropping
/// non-positive edges.
Reweighted reweight(const Graph& g, const ProductState& p, double theta);

enum class EdgeClass { Matched, S0, S1, S2 };
std::string_view to_string(EdgeClass c);

struct PmatchState {
    IntegralMatching matching;  // original edge indices; weight is the rescaled weight
    std::vector<std::pair<std::size_t, TwoQubitDensity>> pair_states;  // by matched edge
    std::vector<std::pair<Vertex, BlochVector>> singles;               // unmatched vertices
    double theta = 0.0;
};

struct PmatchResult {
    PmatchState state;
    std::vector<EdgeClass> classes;
    std::vector<double> edge_energies;  // analytic per-edge values
    double energy = 0.0;
};

/// Partially entangled matching. Analytic per-edge energies are cross-checked
/// against direct traces on the assembled state (InvariantViolation on
/// mismatch above 1e-10).
PmatchResult run_pmatch(const Graph& g, const ProductState& p, double theta);

/// Per-edge energies from the two-qubit marginals of the assembled state.
std::vector<double> assembled_edge_energies(const Graph& g, const PmatchState& s);

struct MatchResult {
    IntegralMatching matching;
    std::vector<double> edge_energies;  // 2 on matched edges, 1/2 elsewhere
    double energy = 0.0;                // (3M + W)/2
};

/// Singlets on a maximum-weight matching, maximally mixed elsewhere.
MatchResult run_match(const Graph& g);

enum class ProviderKind { Zero, File, ExactSearch, Random };
ProviderKind parse_provider_kind(std::string_view s);
std::string to_string(ProviderKind k);

using ProductStateProvider = std::function<ProductState(const Graph&)>;

/// Parses "bx by bz" lines. Vectors within 1e-6 of unit length are
/// renormalized (a warning is appended); others are rejected.
ProductState parse_bloch_file(std::string_view text, int n, std::vector<std::string>* warnings);

struct ExactSearchOptions {
    int starts = 64;
    int max_sweeps = 10000;
    double tolerance = 1e-10;
};

/// Best product state for QMC by multistart coordinate ascent
/// (b_i <- -normalize(sum_j w_ij b_j)). Winner: highest energy, then lowest start.
ProductState exact_search_product(const Graph& g, std::uint64_t seed,
                                  const ExactSearchOptions& opt = {});

ProductState product_provider(ProviderKind kind, const Graph& g, std::uint64_t seed,
                              const std::string& bloch_file = {},
                              std::vector<std::string>* warnings = nullptr);

ProductStateProvider make_provider(ProviderKind kind, std::uint64_t seed,
                                   std::string bloch_file = {},
                                   std::vector<std::string>* warnings = nullptr);

struct UpperBounds {
    double w_plus_fm = 0.0;
    double w_plus_m_over_d = 0.0;
};

struct Report {
    double theta = kDefaultTheta;
    ProductState product;
    MatchResult match;
    PmatchResult pmatch;
    double prod_energy = 0.0;
    double match_energy = 0.0;
    double pmatch_energy = 0.0;
    double combined_energy = 0.0;
    std::string chosen;  // "match" or "pmatch"
    double total_weight = 0.0;
    double max_matching = 0.0;
    double max_fractional_matching = 0.0;
    UpperBounds upper_bounds;
    std::optional<double> exact_lambda_max;
    std::optional<double> observed_ratio;
};

struct CombinedOptions {
    double theta = kDefaultTheta;
    int max_exact_qubits = kMaxEigenQubits;
};

/// Better of MATCH and PMATCH(theta), with monogamy upper bounds and, for
/// small instances, the exact optimum.
Report run_combined(const Graph& g, const ProductStateProvider& provider,
                    const CombinedOptions& opt = {});

} // namespace qmatch::qmc
