#include "oracles.hpp"

#include "qmatch/error.hpp"
#include "qmatch/quantum.hpp"

#include <doctest.h>

#include <numbers>

using namespace qmatch;

TEST_CASE("local terms match Pauli constructions") {
    for (auto h : {Hamiltonian::Qmc, Hamiltonian::Epr})
        CHECK((local_term(h) - oracles::dense_local_term(h)).norm() < 1e-14);
    Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
    swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
    CHECK((local_term(Hamiltonian::Qmc) - (Eigen::Matrix4cd::Identity() - swap)).norm() < 1e-14);
    CHECK(parse_hamiltonian("epr") == Hamiltonian::Epr);
    CHECK_THROWS_AS(parse_hamiltonian("xy"), InputError);
}

TEST_CASE("product edge energy matches the direct trace") {
    Rng rng(11);
    for (int k = 0; k < 200; ++k) {
        auto a = oracles::random_unit(rng).scaled(rng.uniform());
        auto b = oracles::random_unit(rng).scaled(rng.uniform());
        for (auto h : {Hamiltonian::Qmc, Hamiltonian::Epr}) {
            Eigen::Matrix4cd rho = oracles::kron(oracles::qubit(a), oracles::qubit(b));
            const double direct = (oracles::dense_local_term(h) * rho).trace().real();
            CHECK(product_edge_energy(h, a, b) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
    CHECK(product_edge_energy(Hamiltonian::Qmc, {0, 0, 1}, {0, 0, -1}) == doctest::Approx(1.0));
}

TEST_CASE("edge rotations commute") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = oracles::random_graph(rng, 7, 0.5);
        std::vector<double> gammas;
        for (std::size_t k = 0; k < g.num_edges(); ++k) gammas.push_back(rng.uniform(0, 1.5));
        StateVector a(7), b(7);
        for (std::size_t k = 0; k < g.num_edges(); ++k)
            apply_edge_rotation_inplace(a, g.edge(k).u, g.edge(k).v, gammas[k]);
        for (std::size_t k = g.num_edges(); k-- > 0;)
            apply_edge_rotation_inplace(b, g.edge(k).v, g.edge(k).u, gammas[k]);
        double diff = 0.0;
        for (std::size_t i = 0; i < a.amplitudes().size(); ++i)
            diff = std::max(diff, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
        CHECK(diff < 1e-12);
        CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("edge rotation matches the dense exponential") {
    // exp(i g P P) = cos g + i sin g P P since (P P)^2 = I.
    Eigen::Matrix2cd p = (oracles::pauli(1) - oracles::pauli(2)) / std::sqrt(2.0);
    const double g = 0.37;
    Eigen::MatrixXcd pp = oracles::kron(Eigen::MatrixXcd(p), Eigen::MatrixXcd(p));
    Eigen::MatrixXcd u = std::cos(g) * Eigen::MatrixXcd::Identity(4, 4) + std::complex<double>(0, std::sin(g)) * pp;
    Eigen::VectorXcd start = Eigen::VectorXcd::Zero(4);
    start(0) = 1.0;
    Eigen::VectorXcd expect = u * start;
    // Qubit 1 is the left kron factor for a two-qubit register.
    auto psi = apply_edge_rotation(StateVector(2), 1, 0, g);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(psi.amplitudes()[i] - expect(i)) < 1e-14);
}

TEST_CASE("energy is linear over edges") {
    Rng rng(8);
    auto g = oracles::random_graph(rng, 6, 0.6);
    StateVector psi(6);
    for (std::size_t k = 0; k < g.num_edges(); ++k)
        apply_edge_rotation_inplace(psi, g.edge(k).u, g.edge(k).v, rng.uniform(0, 1));
    for (auto h : {Hamiltonian::Qmc, Hamiltonian::Epr}) {
        double sum = 0.0;
        for (const auto& e : g.edges()) sum += hamiltonian_energy(h, Graph(6, {e}), psi);
        CHECK(hamiltonian_energy(h, g, psi) == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("statevector energy matches the dense Hamiltonian") {
    Rng rng(12);
    auto g = oracles::random_graph(rng, 5, 0.7);
    StateVector psi(5);
    for (std::size_t k = 0; k < g.num_edges(); ++k)
        apply_edge_rotation_inplace(psi, g.edge(k).u, g.edge(k).v, rng.uniform(0, 1));
    Eigen::VectorXcd v(32);
    for (int i = 0; i < 32; ++i) v(i) = psi.amplitudes()[i];
    for (auto h : {Hamiltonian::Qmc, Hamiltonian::Epr}) {
        const double dense = (v.adjoint() * oracles::dense_hamiltonian(h, g) * v)(0).real();
        CHECK(hamiltonian_energy(h, g, psi) == doctest::Approx(dense).epsilon(1e-12));
    }
}

TEST_CASE("apply_hamiltonian matches the dense matrix") {
    Rng rng(13);
    auto g = oracles::random_graph(rng, 6, 0.5);
    std::vector<double> in(64), out(64);
    for (auto& x : in) x = rng.uniform(-1, 1);
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(in.data(), 64);
    for (auto h : {Hamiltonian::Qmc, Hamiltonian::Epr}) {
        apply_hamiltonian(h, g, in, out);
        Eigen::VectorXcd expect = oracles::dense_hamiltonian(h, g) * v.cast<std::complex<double>>();
        for (int i = 0; i < 64; ++i) CHECK(std::abs(out[i] - expect(i)) < 1e-12);
    }
}

TEST_CASE("exact lambda_max") {
    for (auto h : {Hamiltonian::Qmc, Hamiltonian::Epr}) {
        CHECK(exact_lambda_max(h, oracles::single_edge()) == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(exact_lambda_max(h, oracles::path3()) == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(exact_lambda_max(h, Graph(3, {})) == 0.0);
    }
    Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 7);
        auto g = oracles::random_graph(rng, n, 0.6, trial % 2 == 0);
        for (auto h : {Hamiltonian::Qmc, Hamiltonian::Epr})
            CHECK(std::abs(exact_lambda_max(h, g) - oracles::dense_lambda_max(h, g)) < 1e-8);
    }
    auto big = generate({GraphKind::Path, 15, 0, WeightMode::Unit, 0.5});
    CHECK_THROWS_AS(exact_lambda_max(Hamiltonian::Qmc, big), InstanceTooLarge);
}

TEST_CASE("bipartite graphs give equal QMC and EPR optima") {
    for (int seed = 0; seed < 20; ++seed) {
        auto g = generate({GraphKind::Random, 8, static_cast<std::uint64_t>(seed), WeightMode::Uniform, 0.4});
        if (!is_bipartite(g)) continue;
        CHECK(std::abs(exact_lambda_max(Hamiltonian::Qmc, g) - exact_lambda_max(Hamiltonian::Epr, g)) < 1e-8);
    }
    auto c6 = generate({GraphKind::Cycle, 6, 0, WeightMode::Unit, 0.5});
    CHECK(std::abs(exact_lambda_max(Hamiltonian::Qmc, c6) - exact_lambda_max(Hamiltonian::Epr, c6)) < 1e-8);
}

TEST_CASE("Bloch matrix conversions") {
    BlochMatrix r = BlochMatrix::Zero();
    r(0, 0) = 1.0;
    CHECK((bloch_to_density(r).matrix() - Eigen::Matrix4cd::Identity() / 4.0).norm() < 1e-14);

    BlochMatrix singlet = BlochMatrix::Zero();
    singlet(0, 0) = 1.0;
    singlet(1, 1) = singlet(2, 2) = singlet(3, 3) = -1.0;
    auto rho = bloch_to_density(singlet);
    Eigen::Vector4cd psi(0, 1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0);
    CHECK((rho.matrix() - psi * psi.adjoint()).norm() < 1e-14);
    CHECK(rho.purity() == doctest::Approx(1.0));
    CHECK(rho.energy(Hamiltonian::Qmc) == doctest::Approx(2.0));

    BlochMatrix bad = r;
    bad(0, 0) = 0.5;
    CHECK_THROWS_AS(bloch_to_density(bad), InputError);

    Rng rng(3);
    auto a = oracles::random_unit(rng).scaled(0.7);
    auto b = oracles::random_unit(rng);
    Matrix4c prod = product_density(a, b);
    CHECK((prod - oracles::kron(oracles::qubit(a), oracles::qubit(b))).norm() < 1e-14);
    BlochMatrix back = density_to_bloch(prod);
    CHECK(back(0, 1) == doctest::Approx(b.x));
    CHECK(back(1, 0) == doctest::Approx(a.x));
    CHECK(back(3, 2) == doctest::Approx(a.z * b.y));
    TwoQubitDensity d(prod);
    CHECK(d.first_marginal().z == doctest::Approx(a.z));
    CHECK(d.second_marginal().y == doctest::Approx(b.y));
}

TEST_CASE("density validation") {
    Eigen::Matrix4cd neg = Eigen::Matrix4cd::Zero();
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(TwoQubitDensity{neg}, InvariantViolation);
    Eigen::Matrix4cd trace2 = Eigen::Matrix4cd::Identity() / 2.0;
    CHECK_THROWS_AS(TwoQubitDensity{trace2}, InvariantViolation);
}

TEST_CASE("reduced pair density of a product state") {
    StateVector psi(3);
    auto rho = reduced_pair_density(psi, 2, 0);
    CHECK(std::abs(rho(0, 0) - 1.0) < 1e-15);
    auto ent = apply_edge_rotation(StateVector(3), 0, 2, std::numbers::pi / 4);
    TwoQubitDensity pair(reduced_pair_density(ent, 0, 2));
    CHECK(pair.energy(Hamiltonian::Epr) == doctest::Approx(2.0));
    CHECK(pair.purity() == doctest::Approx(1.0));
    CHECK_THROWS_AS(reduced_pair_density(ent, 1, 1), InputError);
}
