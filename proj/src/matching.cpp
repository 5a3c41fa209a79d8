#include "qmatch/matching.hpp"

#include "qmatch/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

namespace qmatch {

namespace {

double weight_of(const Graph& g, const std::vector<std::size_t>& edges) {
    double sum = 0.0;
    for (auto k : edges) sum += g.edge(k).w;
    return sum;
}

double optimum_tolerance(double value) { return 1e-9 * std::max(1.0, std::abs(value)); }

// Maximum matching weight restricted to edges with index > after whose
// endpoints are both free.
double residual_optimum(const Graph& g, std::size_t after, const std::vector<bool>& used,
                        std::vector<std::size_t>* chosen) {
    std::vector<Edge> sub;
    std::vector<std::size_t> origin;
    for (std::size_t k = after + 1; k < g.num_edges(); ++k) {
        const auto& e = g.edge(k);
        if (used[e.u] || used[e.v]) continue;
        sub.push_back(e);
        origin.push_back(k);
    }
    if (sub.empty()) return 0.0;
    auto mates = detail::blossom_mates(g.num_vertices(), sub);
    double w = 0.0;
    for (std::size_t i = 0; i < sub.size(); ++i) {
        if (mates[sub[i].u] == sub[i].v) {
            w += sub[i].w;
            if (chosen) chosen->push_back(origin[i]);
        }
    }
    return w;
}

} // namespace

IntegralMatching max_weight_matching(const Graph& g) {
    IntegralMatching out;
    if (g.num_edges() == 0) return out;
    auto mates = detail::blossom_mates(g.num_vertices(), g.edges());
    std::vector<std::size_t> witness;
    for (std::size_t k = 0; k < g.num_edges(); ++k)
        if (mates[g.edge(k).u] == g.edge(k).v) witness.push_back(k);
    const double optimum = weight_of(g, witness);
    const double tol = optimum_tolerance(optimum);

    // Lexicographic refinement: walk edges in canonical order and keep each
    // one whenever an optimal matching consistent with earlier decisions
    // still contains it. The witness is always such an optimal matching.
    std::vector<bool> used(static_cast<std::size_t>(g.num_vertices()), false);
    std::vector<std::size_t> chosen;
    double chosen_weight = 0.0;
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        const auto& e = g.edge(k);
        if (used[e.u] || used[e.v]) continue;
        bool take = std::binary_search(witness.begin(), witness.end(), k);
        if (!take) {
            used[e.u] = used[e.v] = true;
            std::vector<std::size_t> rest;
            double total = chosen_weight + e.w + residual_optimum(g, k, used, &rest);
            used[e.u] = used[e.v] = false;
            if (total >= optimum - tol) {
                take = true;
                witness = chosen;
                witness.push_back(k);
                witness.insert(witness.end(), rest.begin(), rest.end());
                std::sort(witness.begin(), witness.end());
            }
        }
        if (take) {
            chosen.push_back(k);
            chosen_weight += e.w;
            used[e.u] = used[e.v] = true;
        }
    }
    out.edges = std::move(chosen);
    out.weight = weight_of(g, out.edges);
    return out;
}

IntegralMatching brute_force_matching(const Graph& g) {
    const std::size_t m = g.num_edges();
    if (m > 24) throw InstanceTooLarge("brute-force matching supports at most 24 edges");
    std::vector<bool> used(static_cast<std::size_t>(g.num_vertices()), false);
    std::vector<std::size_t> current;
    std::vector<std::size_t> best;
    double best_weight = -1.0;

    // Include-first DFS visits candidate sets in lexicographic order, so the
    // first set reaching the optimum (within tolerance) is the smallest.
    auto dfs = [&](auto&& self, std::size_t k) -> void {
        if (k == m) {
            double w = weight_of(g, current);
            if (w > best_weight + optimum_tolerance(best_weight)) {
                best_weight = w;
                best = current;
            }
            return;
        }
        const auto& e = g.edge(k);
        if (!used[e.u] && !used[e.v]) {
            used[e.u] = used[e.v] = true;
            current.push_back(k);
            self(self, k + 1);
            current.pop_back();
            used[e.u] = used[e.v] = false;
        }
        self(self, k + 1);
    };
    dfs(dfs, 0);
    IntegralMatching out;
    out.edges = std::move(best);
    out.weight = weight_of(g, out.edges);
    return out;
}

FractionalMatching max_weight_fractional_matching(const Graph& g) {
    auto raw = detail::fractional_matching_simplex(g);
    FractionalMatching out;
    out.values.resize(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        double snapped = std::round(raw[k] * 2.0) / 2.0;
        if (std::abs(raw[k] - snapped) > kLpTolerance || snapped < 0.0 || snapped > 1.0)
            throw InvariantViolation("fractional matching vertex is not half-integral");
        out.values[k] = snapped;
    }
    if (!is_valid_fractional_matching(g, out.values))
        throw InvariantViolation("fractional matching violates a vertex constraint");
    for (std::size_t k = 0; k < raw.size(); ++k) out.weight += g.edge(k).w * out.values[k];
    return out;
}

bool in_matching_polytope(const Graph& g, std::span<const double> x) {
    const int n = g.num_vertices();
    if (n > 14) throw InstanceTooLarge("matching polytope check supports at most 14 vertices");
    if (x.size() != g.num_edges()) throw InputError("edge vector size mismatch");
    for (double v : x)
        if (v < -kLpTolerance) return false;
    if (!is_valid_fractional_matching(g, x)) return false;
    std::vector<std::uint32_t> masks;
    for (const auto& e : g.edges()) masks.push_back((1u << e.u) | (1u << e.v));
    const std::uint32_t full = 1u << n;
    for (std::uint32_t s = 0; s < full; ++s) {
        int size = std::popcount(s);
        if (size < 3 || size % 2 == 0) continue;
        double sum = 0.0;
        for (std::size_t k = 0; k < masks.size(); ++k)
            if ((masks[k] & s) == masks[k]) sum += x[k];
        if (sum > (size - 1) / 2.0 + kLpTolerance) return false;
    }
    return true;
}

std::vector<int> mate_table(const Graph& g, const IntegralMatching& m) {
    std::vector<int> mate(static_cast<std::size_t>(g.num_vertices()), -1);
    for (auto k : m.edges) {
        mate[g.edge(k).u] = g.edge(k).v;
        mate[g.edge(k).v] = g.edge(k).u;
    }
    return mate;
}

bool is_valid_matching(const Graph& g, const IntegralMatching& m) {
    std::vector<bool> used(static_cast<std::size_t>(g.num_vertices()), false);
    for (auto k : m.edges) {
        if (k >= g.num_edges()) return false;
        const auto& e = g.edge(k);
        if (used[e.u] || used[e.v]) return false;
        used[e.u] = used[e.v] = true;
    }
    return std::abs(weight_of(g, m.edges) - m.weight) <= optimum_tolerance(m.weight);
}

bool is_valid_fractional_matching(const Graph& g, std::span<const double> values) {
    if (values.size() != g.num_edges()) return false;
    std::vector<double> load(static_cast<std::size_t>(g.num_vertices()), 0.0);
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] < -kLpTolerance || values[k] > 1.0 + kLpTolerance) return false;
        load[g.edge(k).u] += values[k];
        load[g.edge(k).v] += values[k];
    }
    for (double l : load)
        if (l > 1.0 + kLpTolerance) return false;
    return true;
}

} // namespace qmatch
