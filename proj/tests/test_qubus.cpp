#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "boseq/qubus.hpp"

using namespace boseq;

namespace {

BusParams base_params(int n, double delta_mult) {
    BusParams p;
    p.n_bosons = n;
    p.g = 1.0;
    const double sn = std::sqrt(double(n));
    p.omega0 = 6.0 * sn;  // pulse detuning delta_p = omega0/2 = 3 g sqrt(N)
    p.omega = p.omega0 - delta_mult * sn;
    p.photon_cutoff = 3;
    return p;
}

QubitAmplitudes plus(int n) {
    const double s = 1.0 / std::sqrt(2.0);
    return coherent_qubit_state(s, s, n);
}

}  // namespace

TEST_CASE("parameter validation") {
    BusParams p = base_params(1, 20.0);
    p.photon_cutoff = 0;
    CHECK_THROWS_AS(p.validate(), CutoffError);
    p = base_params(1, 20.0);
    p.omega = p.omega0;
    CHECK_THROWS_AS(p.validate(), ArgumentError);
    p = base_params(1, 20.0);
    CHECK_FALSE(p.weak_detuning());
    p.omega = p.omega0 - 2.0;
    CHECK(p.weak_detuning());
}

TEST_CASE("basis layout and single-boson ladder element") {
    const BusSpace space = BusSpace::make(1, 2);
    REQUIRE(space.site_dim() == 3);
    CHECK(space.site_states[0] == std::array<int, 3>{0, 0, 1});
    CHECK(space.site_states[1] == std::array<int, 3>{0, 1, 0});
    CHECK(space.site_states[2] == std::array<int, 3>{1, 0, 0});

    BusParams p = base_params(1, 20.0);
    p.photon_cutoff = 2;
    p.Omega = 0.0;
    const Eigen::MatrixXcd h = build_bus_hamiltonian(p).matrix();
    // g F^- p^dag: site state c (index 0) photon 0 -> site state b (index 1) photon 1
    const Eigen::Index pl = space.photon_levels();
    const Eigen::Index from = (0 * 3 + 1) * pl + 0;  // site1 = c, site2 = b, no photon
    const Eigen::Index to = (1 * 3 + 1) * pl + 1;    // site1 = b, photon 1
    CHECK(std::abs(h(to, from) - cplx(p.g)) < 1e-12);
}

TEST_CASE("g = 0, Omega = 0 gives a diagonal Hamiltonian and exact agreement") {
    BusParams p = base_params(1, 20.0);
    p.g = 0.0;
    p.Omega = 0.0;
    p.omega = p.omega0 - 20.0;  // keep delta positive without g
    const Operator h = build_bus_hamiltonian(p);
    CHECK(h.is_diagonal());

    const RegisterState initial = RegisterState::product({plus(1), plus(1)});
    const CompareResult r = compare_effective(p, initial, 0.7);
    CHECK(r.fidelity >= 1.0 - 1e-9);
    CHECK(std::abs(r.photon_leak) < 1e-12);
}

TEST_CASE("per-site boson number is conserved") {
    for (int n : {1, 2}) {
        BusParams p = base_params(n, 20.0);
        p.Omega = 0.4;
        const BusSpace space = BusSpace::make(n, p.photon_cutoff);
        const Eigen::MatrixXcd h = build_bus_hamiltonian(p).matrix();

        const Eigen::Index d3 = space.site_dim();
        const Eigen::Index pl = space.photon_levels();
        Eigen::MatrixXcd num1 = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
        for (Eigen::Index i = 0; i < d3; ++i)
            for (Eigen::Index j = 0; j < d3; ++j)
                for (Eigen::Index q = 0; q < pl; ++q) {
                    const auto& s = space.site_states[i];
                    const Eigen::Index flat = (i * d3 + j) * pl + q;
                    num1(flat, flat) = double(s[0] + s[1] + s[2]);
                }
        CHECK((h * num1 - num1 * h).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("effective model basics") {
    BusParams p = base_params(1, 20.0);
    p.Omega = 0.0;
    CHECK(effective_hamiltonian(p).matrix().cwiseAbs().maxCoeff() < 1e-14);

    p.Omega = 0.5;
    const Eigen::MatrixXcd heff = effective_hamiltonian(p).matrix();
    const double j = p.g * p.g * p.Omega / (p.delta() * p.delta());
    // N=1 exchange: |k1=1,k2=0> <-> |k1=0,k2=1| with element 4J
    CHECK(std::abs(heff(2, 1) - cplx(4.0 * j)) < 1e-12);
    CHECK(std::abs(heff(0, 0)) < 1e-12);

    // energy scale grows as N^2
    BusParams p2 = base_params(2, 20.0);
    p2.Omega = 0.5;
    BusParams p4 = base_params(4, 20.0);
    p4.Omega = 0.5;
    p4.omega = p4.omega0 - 20.0 * std::sqrt(2.0);  // same absolute delta as N=2
    p2.omega = p2.omega0 - 20.0 * std::sqrt(2.0);
    p2.omega0 = p4.omega0;
    p2.omega = p4.omega;
    const double e2 = effective_hamiltonian(p2).eig().values.cwiseAbs().maxCoeff();
    const double e4 = effective_hamiltonian(p4).eig().values.cwiseAbs().maxCoeff();
    CHECK(e4 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("measured exchange coupling scales as g^2") {
    BusParams p = base_params(1, 50.0);
    p.Omega = 0.3;
    const double j1 = measure_exchange_coupling(p);
    p.g = 2.0;
    const double j2 = measure_exchange_coupling(p);
    CHECK(j2 / j1 == doctest::Approx(4.0).epsilon(0.10));
}

TEST_CASE("infidelity falls with detuning and photons stay scarce") {
    const auto rows = run_bus_sweep(1, 1.0, {10.0, 20.0, 40.0, 50.0});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].infidelity > rows[1].infidelity);
    CHECK(rows[1].infidelity > rows[2].infidelity);
    CHECK(rows[3].infidelity < 0.01);
    for (const auto& row : rows) {
        CHECK(row.photon_leak < 0.02);
        CHECK(row.photon_leak >= 0.0);
    }
}

TEST_CASE("cutoff occupancy refusal") {
    // resonant photon with a strong kick pushes population to the cutoff level
    BusParams p;
    p.n_bosons = 1;
    p.g = 1.0;
    p.omega0 = 2.0;
    p.omega = 1.9;
    p.Omega = 2.0;
    p.photon_cutoff = 1;
    const RegisterState initial = RegisterState::product({plus(1), plus(1)});
    CHECK_THROWS_AS(compare_effective(p, initial, 5.0), CutoffError);
}

TEST_CASE("ramp schedule shape") {
    const auto segs = ramped_pulse(0.8, 10.0, 2.0, 4);
    REQUIRE(segs.size() == 9);
    CHECK(segs[0].amplitude == doctest::Approx(0.2));
    CHECK(segs[3].amplitude == doctest::Approx(0.8));
    CHECK(segs[4].duration == doctest::Approx(6.0));
    CHECK(segs[8].amplitude == doctest::Approx(0.2));
    CHECK_THROWS_AS(ramped_pulse(0.8, 3.0, 2.0, 4), ArgumentError);
}
