#pragma once

// Independent reference computations used only by the tests.

#include "qmatch/graph.hpp"
#include "qmatch/quantum.hpp"
#include "qmatch/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

using qmatch::Graph;
using Dense = Eigen::MatrixXcd;

inline Eigen::Matrix2cd pauli(int k) {
    using C = std::complex<double>;
    Eigen::Matrix2cd m;
    switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, C(0, -1), C(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
    }
    return m;
}

inline Dense kron(const Dense& a, const Dense& b) {
    Dense out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Pauli string on n qubits; qubit k is bit k, so qubit n-1 is the leftmost factor.
inline Dense pauli_string(int n, const std::vector<int>& ops) {
    Dense out = Dense::Identity(1, 1);
    for (int q = n - 1; q >= 0; --q) out = kron(out, Dense(pauli(ops[q])));
    return out;
}

/// Dense H_G assembled from Pauli strings.
inline Dense dense_hamiltonian(qmatch::Hamiltonian h, const Graph& g) {
    const int n = g.num_vertices();
    const Eigen::Index dim = Eigen::Index{1} << n;
    Dense H = Dense::Zero(dim, dim);
    const double sx = h == qmatch::Hamiltonian::Qmc ? -1.0 : 1.0;
    const double sy = -1.0;
    const double sz = sx;
    for (const auto& e : g.edges()) {
        auto term = [&](int p) {
            std::vector<int> ops(static_cast<std::size_t>(n), 0);
            ops[e.u] = p;
            ops[e.v] = p;
            return pauli_string(n, ops);
        };
        H += e.w * 0.5 * (Dense::Identity(dim, dim) + sx * term(1) + sy * term(2) + sz * term(3));
    }
    return H;
}

inline double dense_lambda_max(qmatch::Hamiltonian h, const Graph& g) {
    if (g.num_edges() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Dense> es(dense_hamiltonian(h, g));
    return es.eigenvalues().maxCoeff();
}

/// Two-qubit local term from Pauli matrices, first qubit as the left factor.
inline Eigen::Matrix4cd dense_local_term(qmatch::Hamiltonian h) {
    const double s = h == qmatch::Hamiltonian::Qmc ? -1.0 : 1.0;
    auto pp = [](int p) { return Eigen::Matrix4cd(kron(Dense(pauli(p)), Dense(pauli(p)))); };
    return 0.5 * (Eigen::Matrix4cd::Identity() + s * pp(1) - pp(2) + s * pp(3));
}

inline Eigen::Matrix2cd qubit(const qmatch::BlochVector& b) {
    return 0.5 * (pauli(0) + b.x * pauli(1) + b.y * pauli(2) + b.z * pauli(3));
}

/// Maximum over all {0, 1/2, 1} edge assignments obeying vertex capacity 1.
inline double brute_force_half_integral(const Graph& g) {
    const std::size_t m = g.num_edges();
    std::vector<int> x(m, 0);
    double best = 0.0;
    while (true) {
        std::vector<int> load(static_cast<std::size_t>(g.num_vertices()), 0);
        bool ok = true;
        double w = 0.0;
        for (std::size_t k = 0; k < m && ok; ++k) {
            const auto& e = g.edge(k);
            load[e.u] += x[k];
            load[e.v] += x[k];
            ok = load[e.u] <= 2 && load[e.v] <= 2;
            w += e.w * x[k] / 2.0;
        }
        if (ok) best = std::max(best, w);
        std::size_t k = 0;
        while (k < m && x[k] == 2) x[k++] = 0;
        if (k == m) break;
        ++x[k];
    }
    return best;
}

inline qmatch::BlochVector random_unit(qmatch::Rng& rng) {
    while (true) {
        qmatch::BlochVector b{rng.normal(), rng.normal(), rng.normal()};
        const double n = b.norm();
        if (n > 1e-6) return b.scaled(1.0 / n);
    }
}

/// Random simple graph with uniform weights; may have no edges.
inline Graph random_graph(qmatch::Rng& rng, int n, double p, bool unit = false) {
    std::vector<qmatch::Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform() < p) edges.push_back({u, v, unit ? 1.0 : 0.05 + rng.uniform()});
    return Graph(n, std::move(edges));
}

inline Graph path3() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }
inline Graph single_edge(double w = 1.0) { return Graph(2, {{0, 1, w}}); }
inline Graph triangle() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }

} // namespace oracles
