#pragma once

#include "qmatch/graph.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace qmatch {

/// Absolute tolerance for LP feasibility and half-integrality checks.
inline constexpr double kLpTolerance = 1e-9;

struct IntegralMatching {
    std::vector<std::size_t> edges;  // canonical edge indices, ascending
    double weight = 0.0;             // summed in canonical order
};

struct FractionalMatching {
    std::vector<double> values;  // one per canonical edge, each in {0, 1/2, 1}
    double weight = 0.0;
};

/// Maximum-weight integral matching (Edmonds' blossom method, O(n^3) dual
/// updates). Among optimal matchings the lexicographically smallest edge-index
/// list is returned.
IntegralMatching max_weight_matching(const Graph& g);

/// Exhaustive search over edge subsets; same tie-breaking as above.
/// Throws InstanceTooLarge when |E| > 24.
IntegralMatching brute_force_matching(const Graph& g);

/// Optimal vertex of {m >= 0, sum_{e ni v} m_e <= 1}. The simplex output is
/// checked to be half-integral and snapped to {0, 1/2, 1}; a non-half-integral
/// vertex raises InvariantViolation.
FractionalMatching max_weight_fractional_matching(const Graph& g);

/// Membership in the integral matching polytope via degree and odd-set
/// constraints. Throws InstanceTooLarge when n > 14.
bool in_matching_polytope(const Graph& g, std::span<const double> x);

/// Vertex-to-partner table (-1 for unmatched vertices).
std::vector<int> mate_table(const Graph& g, const IntegralMatching& m);

/// Checks that m is a set of vertex-disjoint edges with the recorded weight.
bool is_valid_matching(const Graph& g, const IntegralMatching& m);

/// Checks vertex sums <= 1 and value range [0, 1] within kLpTolerance.
bool is_valid_fractional_matching(const Graph& g, std::span<const double> values);

namespace detail {

/// Raw blossom solver: mate[v] is the partner of v or -1. Maximum weight, not
/// maximum cardinality.
std::vector<int> blossom_mates(int n, std::span<const Edge> edges);

/// Raw simplex on the fractional matching LP, unsnapped.
std::vector<double> fractional_matching_simplex(const Graph& g);

} // namespace detail

} // namespace qmatch
