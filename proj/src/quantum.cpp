#include "qmatch/quantum.hpp"

#include "qmatch/error.hpp"
#include "qmatch/rng.hpp"

#include <array>
#include <cmath>
#include <string>

namespace qmatch {

namespace {

const Matrix2c& pauli(int mu) {
    static const std::array<Matrix2c, 4> mats = [] {
        std::array<Matrix2c, 4> m;
        const Complex i(0.0, 1.0);
        m[0] << 1, 0, 0, 1;
        m[1] << 0, 1, 1, 0;
        m[2] << 0, -i, i, 0;
        m[3] << 1, 0, 0, -1;
        return m;
    }();
    return mats[mu];
}

void check_qubit(int q, int n) {
    if (q < 0 || q >= n)
        throw InputError("qubit index " + std::to_string(q) + " out of range for " +
                         std::to_string(n) + " qubits");
}

} // namespace

Hamiltonian parse_hamiltonian(std::string_view s) {
    if (s == "qmc") return Hamiltonian::Qmc;
    if (s == "epr") return Hamiltonian::Epr;
    throw InputError("unknown Hamiltonian '" + std::string(s) + "' (expected qmc|epr)");
}

std::string_view to_string(Hamiltonian h) { return h == Hamiltonian::Qmc ? "qmc" : "epr"; }

double BlochVector::norm() const { return std::sqrt(dot(*this)); }

bool BlochVector::is_pure(double tol) const { return std::abs(norm() - 1.0) <= tol; }

Matrix2c qubit_density(const BlochVector& b) {
    return 0.5 * (pauli(0) + b.x * pauli(1) + b.y * pauli(2) + b.z * pauli(3));
}

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Matrix4c local_term(Hamiltonian h) {
    const double sx = h == Hamiltonian::Qmc ? -1.0 : 1.0;
    const double sz = sx;
    return 0.5 * (kron(pauli(0), pauli(0)) + sx * kron(pauli(1), pauli(1)) -
                  kron(pauli(2), pauli(2)) + sz * kron(pauli(3), pauli(3)));
}

double product_edge_energy(Hamiltonian h, const BlochVector& bi, const BlochVector& bj) {
    if (h == Hamiltonian::Qmc) return 0.5 * (1.0 - bi.dot(bj));
    return 0.5 * (1.0 + bi.x * bj.x - bi.y * bj.y + bi.z * bj.z);
}

StateVector::StateVector(int n) : n_(n) {
    if (n < 1 || n > kMaxQubits)
        throw InstanceTooLarge("statevector supports 1.." + std::to_string(kMaxQubits) +
                               " qubits, got " + std::to_string(n));
    amps_.assign(std::size_t{1} << n, Complex(0.0, 0.0));
    amps_[0] = 1.0;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

void apply_edge_rotation_inplace(StateVector& psi, int u, int v, double gamma) {
    const int n = psi.num_qubits();
    check_qubit(u, n);
    check_qubit(v, n);
    if (u == v) throw InputError("edge rotation needs two distinct qubits");
    // P|0> = p0|1>, P|1> = p1|0>, so P_u P_v |a b> = p_a p_b |~a ~b>.
    // p0^2 = -i, p1^2 = i, p0 p1 = 1.
    const double c = std::cos(gamma);
    const Complex is(0.0, std::sin(gamma));
    const Complex p00 = Complex(0.0, -1.0);
    const Complex p11 = Complex(0.0, 1.0);
    const std::size_t bu = std::size_t{1} << u;
    const std::size_t bv = std::size_t{1} << v;
    auto amps = psi.amplitudes();
    for (std::size_t x = 0; x < amps.size(); ++x) {
        if (x & (bu | bv)) continue;
        Complex& a00 = amps[x];
        Complex& a10 = amps[x | bu];
        Complex& a01 = amps[x | bv];
        Complex& a11 = amps[x | bu | bv];
        Complex n00 = c * a00 + is * p11 * a11;
        Complex n11 = c * a11 + is * p00 * a00;
        Complex n01 = c * a01 + is * a10;
        Complex n10 = c * a10 + is * a01;
        a00 = n00;
        a11 = n11;
        a01 = n01;
        a10 = n10;
    }
}

Matrix4c reduced_pair_density(const StateVector& psi, int u, int v) {
    const int n = psi.num_qubits();
    check_qubit(u, n);
    check_qubit(v, n);
    if (u == v) throw InputError("reduced density needs two distinct qubits");
    const std::size_t bu = std::size_t{1} << u;
    const std::size_t bv = std::size_t{1} << v;
    const std::size_t offs[4] = {0, bv, bu, bu | bv};  // local index 2*a_u + a_v
    Matrix4c rho = Matrix4c::Zero();
    auto amps = psi.amplitudes();
    for (std::size_t x = 0; x < amps.size(); ++x) {
        if (x & (bu | bv)) continue;
        Complex a[4];
        for (int k = 0; k < 4; ++k) a[k] = amps[x | offs[k]];
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) rho(r, c) += a[r] * std::conj(a[c]);
    }
    return rho;
}

std::vector<double> edge_energies(Hamiltonian h, const Graph& g, const StateVector& psi) {
    if (psi.num_qubits() != g.num_vertices())
        throw InputError("state has " + std::to_string(psi.num_qubits()) + " qubits, graph has " +
                         std::to_string(g.num_vertices()) + " vertices");
    const Matrix4c term = local_term(h);
    std::vector<double> out;
    out.reserve(g.num_edges());
    for (const auto& e : g.edges())
        out.push_back((term * reduced_pair_density(psi, e.u, e.v)).trace().real());
    return out;
}

double hamiltonian_energy(Hamiltonian h, const Graph& g, const StateVector& psi) {
    auto per_edge = edge_energies(h, g, psi);
    double sum = 0.0;
    for (std::size_t k = 0; k < per_edge.size(); ++k) sum += g.edge(k).w * per_edge[k];
    return sum;
}

void apply_hamiltonian(Hamiltonian h, const Graph& g, std::span<const double> in,
                       std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& e : g.edges()) {
        const std::size_t bu = std::size_t{1} << e.u;
        const std::size_t bv = std::size_t{1} << e.v;
        const std::size_t both = bu | bv;
        if (h == Hamiltonian::Qmc) {
            // h = I - SWAP: nonzero only where the two bits differ.
            for (std::size_t x = 0; x < in.size(); ++x) {
                bool a = x & bu;
                bool b = x & bv;
                if (a != b) out[x] += e.w * (in[x] - in[x ^ both]);
            }
        } else {
            // h = 2|phi+><phi+|: |00> and |11> map to |00> + |11>.
            for (std::size_t x = 0; x < in.size(); ++x) {
                bool a = x & bu;
                bool b = x & bv;
                if (a == b) out[x] += e.w * (in[x] + in[x ^ both]);
            }
        }
    }
}

TopEigenpair top_eigenpair(Hamiltonian h, const Graph& g, const PowerIterationOptions& opt) {
    const int n = g.num_vertices();
    if (n > kMaxEigenQubits)
        throw InstanceTooLarge("exact eigensolver supports at most " +
                               std::to_string(kMaxEigenQubits) + " qubits");
    const std::size_t dim = std::size_t{1} << n;
    Rng rng(opt.seed);
    std::vector<double> v(dim), w(dim);
    double nrm = 0.0;
    for (auto& x : v) {
        x = rng.uniform(-1.0, 1.0);
        nrm += x * x;
    }
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;

    TopEigenpair res;
    if (g.num_edges() == 0) {
        res.vector = std::move(v);
        res.converged = true;
        return res;
    }
    double prev = -1.0;
    for (int it = 1; it <= opt.max_iterations; ++it) {
        apply_hamiltonian(h, g, v, w);
        double rq = 0.0, wn = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            rq += v[i] * w[i];
            wn += w[i] * w[i];
        }
        wn = std::sqrt(wn);
        res.value = rq;
        res.iterations = it;
        if (wn == 0.0) {
            res.converged = true;
            break;
        }
        for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / wn;
        if (std::abs(rq - prev) < opt.tolerance * std::max(1.0, std::abs(rq))) {
            res.converged = true;
            break;
        }
        prev = rq;
    }
    // Final Rayleigh quotient of the normalized iterate.
    apply_hamiltonian(h, g, v, w);
    double rq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) rq += v[i] * w[i];
    res.value = rq;
    res.vector = std::move(v);
    return res;
}

double exact_lambda_max(Hamiltonian h, const Graph& g) {
    auto top = top_eigenpair(h, g);
    if (!top.converged) throw InvariantViolation("power iteration did not converge");
    return top.value;
}

double pair_moment(std::span<const double> state, int u, int v) {
    // <XX + YY + ZZ> = 2<SWAP> - 1.
    const std::size_t bu = std::size_t{1} << u;
    const std::size_t bv = std::size_t{1} << v;
    const std::size_t both = bu | bv;
    double swap = 0.0;
    for (std::size_t x = 0; x < state.size(); ++x) {
        bool a = x & bu;
        bool b = x & bv;
        swap += state[x] * (a == b ? state[x] : state[x ^ both]);
    }
    return (2.0 * swap - 1.0) / 3.0;
}

TwoQubitDensity::TwoQubitDensity(const Matrix4c& m) : m_(m) {
    if ((m_ - m_.adjoint()).norm() > 1e-12) throw InvariantViolation("density is not Hermitian");
    if (std::abs(m_.trace() - Complex(1.0, 0.0)) > 1e-12)
        throw InvariantViolation("density trace differs from 1");
    if (min_eigenvalue() < -1e-10) throw InvariantViolation("density has a negative eigenvalue");
}

BlochVector TwoQubitDensity::first_marginal() const {
    auto t = [&](int mu) { return (kron(pauli(mu), pauli(0)) * m_).trace().real(); };
    return {t(1), t(2), t(3)};
}

BlochVector TwoQubitDensity::second_marginal() const {
    auto t = [&](int mu) { return (kron(pauli(0), pauli(mu)) * m_).trace().real(); };
    return {t(1), t(2), t(3)};
}

double TwoQubitDensity::purity() const { return (m_ * m_).trace().real(); }

double TwoQubitDensity::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double TwoQubitDensity::energy(Hamiltonian h) const { return (local_term(h) * m_).trace().real(); }

TwoQubitDensity bloch_to_density(const BlochMatrix& r) {
    if (std::abs(r(0, 0) - 1.0) > 1e-12) throw InputError("Bloch matrix needs r_00 = 1");
    Matrix4c rho = Matrix4c::Zero();
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            if (r(mu, nu) != 0.0) rho += r(mu, nu) * kron(pauli(mu), pauli(nu));
    rho *= 0.25;
    return TwoQubitDensity(0.5 * (rho + rho.adjoint()));
}

BlochMatrix density_to_bloch(const Matrix4c& rho) {
    BlochMatrix r;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) r(mu, nu) = (kron(pauli(mu), pauli(nu)) * rho).trace().real();
    return r;
}

Matrix4c product_density(const BlochVector& a, const BlochVector& b) {
    return kron(qubit_density(a), qubit_density(b));
}

} // namespace qmatch
