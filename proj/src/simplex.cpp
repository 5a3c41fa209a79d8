// Dense tableau simplex for max w.m s.t. sum_{e ni v} m_e <= 1, m >= 0.
// Bland's rule: lowest index enters, lowest basic index leaves on ties.

#include "qmatch/matching.hpp"

#include "qmatch/error.hpp"

#include <cmath>

namespace qmatch::detail {

std::vector<double> fractional_matching_simplex(const Graph& g) {
    const std::size_t rows = static_cast<std::size_t>(g.num_vertices());
    const std::size_t ne = g.num_edges();
    const std::size_t cols = ne + rows;  // structural then slack
    constexpr double eps = 1e-12;

    // tableau[r][c] with rhs in the last column
    std::vector<std::vector<double>> tab(rows, std::vector<double>(cols + 1, 0.0));
    for (std::size_t k = 0; k < ne; ++k) {
        tab[g.edge(k).u][k] = 1.0;
        tab[g.edge(k).v][k] = 1.0;
    }
    for (std::size_t r = 0; r < rows; ++r) {
        tab[r][ne + r] = 1.0;
        tab[r][cols] = 1.0;
    }
    std::vector<double> cost(cols, 0.0);
    for (std::size_t k = 0; k < ne; ++k) cost[k] = g.edge(k).w;
    std::vector<double> reduced = cost;
    std::vector<std::size_t> basis(rows);
    for (std::size_t r = 0; r < rows; ++r) basis[r] = ne + r;

    const std::size_t max_pivots = 50 * (cols + rows) + 1000;
    for (std::size_t iter = 0;; ++iter) {
        if (iter > max_pivots) throw InvariantViolation("simplex exceeded pivot limit");
        std::size_t enter = cols;
        for (std::size_t c = 0; c < cols; ++c) {
            if (reduced[c] > eps) {
                enter = c;
                break;
            }
        }
        if (enter == cols) break;

        std::size_t leave = rows;
        double best_ratio = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            double a = tab[r][enter];
            if (a <= eps) continue;
            double ratio = tab[r][cols] / a;
            if (leave == rows || ratio < best_ratio - eps ||
                (ratio <= best_ratio + eps && basis[r] < basis[leave])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        if (leave == rows) throw InvariantViolation("fractional matching LP reported unbounded");

        auto& prow = tab[leave];
        double piv = prow[enter];
        for (auto& x : prow) x /= piv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == leave) continue;
            double f = tab[r][enter];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols; ++c) tab[r][c] -= f * prow[c];
            tab[r][enter] = 0.0;
        }
        double f = reduced[enter];
        for (std::size_t c = 0; c < cols; ++c) reduced[c] -= f * prow[c];
        reduced[enter] = 0.0;
        basis[leave] = enter;
    }

    std::vector<double> x(ne, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        if (basis[r] < ne) x[basis[r]] = tab[r][cols];
    return x;
}

} // namespace qmatch::detail
