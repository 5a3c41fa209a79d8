#pragma once

#include "qmatch/graph.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace qmatch {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
/// Real 4x4 Bloch matrix r_{mu nu}, indices over (I, X, Y, Z).
using BlochMatrix = Eigen::Matrix4d;

enum class Hamiltonian { Qmc, Epr };

Hamiltonian parse_hamiltonian(std::string_view s);
std::string_view to_string(Hamiltonian h);

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
    BlochVector scaled(double s) const { return {x * s, y * s, z * s}; }
    bool is_pure(double tol = 1e-12) const;

    friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

/// Single-qubit density (I + b.sigma)/2.
Matrix2c qubit_density(const BlochVector& b);

/// 4x4 local term; qubit order (first, second), basis index 2*a + b.
/// QMC: (II - XX - YY - ZZ)/2, EPR: (II + XX - YY + ZZ)/2.
Matrix4c local_term(Hamiltonian h);

Matrix4c kron(const Matrix2c& a, const Matrix2c& b);

/// Energy of a product state on one term.
double product_edge_energy(Hamiltonian h, const BlochVector& bi, const BlochVector& bj);

/// Dense n-qubit state. Qubit k is bit k of the amplitude index.
class StateVector {
public:
    static constexpr int kMaxQubits = 20;

    /// |0...0> on n qubits.
    explicit StateVector(int n);

    int num_qubits() const { return n_; }
    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> amplitudes() { return amps_; }
    double norm() const;

private:
    int n_;
    std::vector<Complex> amps_;
};

/// (cos g) I + i (sin g) P_u P_v with P = (X - Y)/sqrt(2), in place.
void apply_edge_rotation_inplace(StateVector& psi, int u, int v, double gamma);

inline StateVector apply_edge_rotation(StateVector psi, int u, int v, double gamma) {
    apply_edge_rotation_inplace(psi, u, v, gamma);
    return psi;
}

/// Two-qubit reduced density matrix on (u, v), u as the first factor.
Matrix4c reduced_pair_density(const StateVector& psi, int u, int v);

/// Per-edge <psi|h_uv|psi>, canonical edge order, unweighted.
std::vector<double> edge_energies(Hamiltonian h, const Graph& g, const StateVector& psi);

/// sum_e w_e <psi|h_e|psi>, reduced in canonical edge order.
double hamiltonian_energy(Hamiltonian h, const Graph& g, const StateVector& psi);

/// Real-basis action out = H_G in. Both Hamiltonians are real symmetric in
/// the computational basis.
void apply_hamiltonian(Hamiltonian h, const Graph& g, std::span<const double> in,
                       std::span<double> out);

struct PowerIterationOptions {
    double tolerance = 1e-12;  // on successive Rayleigh quotients, relative to max(1, lambda)
    int max_iterations = 50000;
    std::uint64_t seed = 0x5eedULL;
};

struct TopEigenpair {
    double value = 0.0;
    std::vector<double> vector;  // unit norm
    int iterations = 0;
    bool converged = false;
};

inline constexpr int kMaxEigenQubits = 14;

/// Power iteration on the PSD operator H_G. Throws InstanceTooLarge for n > 14.
TopEigenpair top_eigenpair(Hamiltonian h, const Graph& g, const PowerIterationOptions& opt = {});

double exact_lambda_max(Hamiltonian h, const Graph& g);

/// s_uv = <XX + YY + ZZ>/3 for a real state vector (qubit k = bit k).
double pair_moment(std::span<const double> state, int u, int v);

/// Two-qubit density matrix with validated invariants.
class TwoQubitDensity {
public:
    /// Throws InvariantViolation unless Hermitian, unit trace and PSD.
    explicit TwoQubitDensity(const Matrix4c& m);

    const Matrix4c& matrix() const { return m_; }
    BlochVector first_marginal() const;
    BlochVector second_marginal() const;
    double purity() const;
    double min_eigenvalue() const;
    double energy(Hamiltonian h) const;

private:
    Matrix4c m_;
};

/// rho = (1/4) sum r_{mu nu} sigma_mu (x) sigma_nu. Requires r(0,0) == 1.
TwoQubitDensity bloch_to_density(const BlochMatrix& r);

/// Inverse map r_{mu nu} = Tr[(sigma_mu (x) sigma_nu) rho].
BlochMatrix density_to_bloch(const Matrix4c& rho);

Matrix4c product_density(const BlochVector& a, const BlochVector& b);

} // namespace qmatch
