#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "spintex/effective.hpp"
#include "spintex/rng.hpp"
#include "spintex/spinops.hpp"

using namespace spintex;

namespace {

SpinLattice two_spin_lattice(double b) {
    SpinLattice l = build_chain(2, 1.0, 0.0, b, 0.0, 0);
    return l;
}

Eigen::Matrix3d rotation(double theta, const Eigen::Vector3d& n) {
    return Eigen::AngleAxisd(theta, n).toRotationMatrix();
}

MatrixXcd commutator(const MatrixXcd& a, const MatrixXcd& b) { return a * b - b * a; }

MatrixXcd axis_charge_dense(const EffectiveHamiltonian& h) {
    EffectiveHamiltonian charge;
    charge.n_spins = h.n_spins;
    charge.site_fields.resize(h.n_spins);
    for (int k = 0; k < h.n_spins; ++k)
        charge.site_fields[k] = h.axes.empty() ? Eigen::Vector3d::UnitX() : h.axes[k];
    return BlockHamiltonian::from(charge).dense();
}

}  // namespace

TEST_CASE("spin-locking pair Hamiltonian eigenvalues for a single pair") {
    EffectiveHamiltonian h = build_sl_hamiltonian(two_spin_lattice(1.0));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(BlockHamiltonian::from(h).dense());
    // -(1/2)(3 I^x I^x - I.I) in the coupled x basis: x-polarized triplet at
    // -1/4, transverse triplet at +1/2, singlet at 0
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    std::sort(ev.begin(), ev.end());
    CHECK(ev[0] == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(std::abs(ev[2]) < 1e-12);
    CHECK(ev[3] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("SL Hamiltonian commutes with total I^x (N = 3 dense)") {
    SpinLattice l = build_chain(3, 1.0, 0.0, -1.0, 0.3, 4);
    EffectiveHamiltonian h = build_sl_hamiltonian(l);
    MatrixXcd hd = BlockHamiltonian::from(h).dense();
    MatrixXcd ix = axis_charge_dense(h);
    CHECK(commutator(hd, ix).norm() < 1e-13 * hd.norm());
}

TEST_CASE("zero couplings contribute no pair tensors") {
    SpinLattice l = two_spin_lattice(0.0);
    CHECK(build_sl_hamiltonian(l).pairs.empty());
}

TEST_CASE("pi Hamiltonian with zero profile reduces to the bare dipolar pair") {
    SpinLattice l = two_spin_lattice(0.7);
    PotentialProfile zero = constant_profile(2, 0.0);
    EffectiveHamiltonian h = build_pi_hamiltonian(l, std::nullopt, zero);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(BlockHamiltonian::from(h).dense());
    // b (3 I^z I^z - I.I): z triplets at b/2, flip-flop triplet at -b, singlet 0
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    std::sort(ev.begin(), ev.end());
    CHECK(ev[0] == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(std::abs(ev[1]) < 1e-12);
    CHECK(ev[2] == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(ev[3] == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("pi Hamiltonian site fields follow the profile pointwise") {
    SpinLattice l = build_chain(10, 1.0, 0.0, -1.0, 0.0, 0);
    PotentialProfile p = toy_profile(10, 0, 0.05 * M_PI, 0.5 * M_PI, 1.0);
    EffectiveHamiltonian h = build_pi_hamiltonian(l, std::nullopt, p);
    CHECK(h.kind == HamiltonianKind::TOY_PI);
    int flips = 0;
    for (int k = 0; k < 10; ++k) {
        CHECK(h.site_fields[k].x() == p.phi[k]);
        CHECK(h.site_fields[k].y() == 0.0);
        if (k > 0 && std::signbit(p.phi[k]) != std::signbit(p.phi[k - 1])) ++flips;
    }
    CHECK(flips == 1);
}

TEST_CASE("linearized PI fields are eta + delta_theta/(2 pi tau)") {
    SpinLattice l = build_chain(4, 1.0, 0.0, -1.0, 0.0, 0);
    l.eta = {50.0, 10.0, 3.0, 1.0};
    PulseSequence seq = PulseSequence::from_kick_angle(0.95 * M_PI, 50e3, 51e-6, 0);
    EffectiveHamiltonian h = build_pi_hamiltonian(l, seq, std::nullopt);
    CHECK(h.kind == HamiltonianKind::PI);
    const double shift = seq.delta_theta() / (2 * M_PI * seq.period());
    for (int k = 0; k < 4; ++k)
        CHECK(h.site_fields[k].x() == doctest::Approx(l.eta[k] + shift).epsilon(1e-12));
}

TEST_CASE("toggling pair tensor matches the direct rotation-matrix average") {
    Rng rng(9);
    const Eigen::Vector3d d(-1, -1, 2);
    for (int trial = 0; trial < 12; ++trial) {
        const int n_cycles = 1 + static_cast<int>(rng.integer(40));
        const double tk = rng.uniform(0, 2 * M_PI), tl = rng.uniform(0, 2 * M_PI);
        Eigen::Vector3d nk(rng.normal(), rng.normal(), rng.normal());
        Eigen::Vector3d nl(rng.normal(), rng.normal(), rng.normal());
        nk.normalize();
        nl.normalize();
        Eigen::Matrix3d direct = Eigen::Matrix3d::Zero();
        for (int c = 1; c <= n_cycles; ++c)
            direct += rotation(c * tk, nk).transpose() * d.asDiagonal() * rotation(c * tl, nl);
        direct /= n_cycles;
        Eigen::Matrix3d closed = toggling_pair_tensor(tk, nk, tl, nl, n_cycles);
        CHECK((closed - direct).norm() < 1e-10);
    }
}

TEST_CASE("toggling Hamiltonian reduces to SL at eta = 0, theta = pi/2") {
    SpinLattice l = build_chain(6, 1.0, 0.0, -1.0, 0.3, 17);
    PulseSequence seq;
    seq.rabi = 100.0;
    seq.t_kick = 1.0 / 400.0;  // quarter turn
    seq.t_dd = 1e-3;
    EffectiveHamiltonian toggling = build_toggling_hamiltonian(l, seq);
    EffectiveHamiltonian sl = build_sl_hamiltonian(l);
    REQUIRE(toggling.pairs.size() == sl.pairs.size());
    for (std::size_t p = 0; p < sl.pairs.size(); ++p)
        CHECK((toggling.pairs[p].m - sl.pairs[p].m).cwiseAbs().maxCoeff() < 1e-12);
    for (const auto& f : toggling.site_fields) CHECK(f.norm() == 0.0);
}

TEST_CASE("toggling Hamiltonian commutes with the tilted charge (3 spins dense)") {
    SpinLattice l = build_chain(3, 1.0, 0.0, -1.0, 0.2, 21);
    l.eta = {40.0, 11.0, 2.5};
    PulseSequence seq;
    seq.rabi = 120.0;
    seq.t_kick = 1.2e-3;
    seq.t_dd = 0.9e-3;
    EffectiveHamiltonian h = build_toggling_hamiltonian(l, seq);
    MatrixXcd hd = BlockHamiltonian::from(h).dense();
    MatrixXcd charge = axis_charge_dense(h);
    CHECK(commutator(hd, charge).cwiseAbs().maxCoeff() < 1e-12 * hd.cwiseAbs().maxCoeff());
}

TEST_CASE("single site gives a pure site-field Hamiltonian at finite cycles") {
    SpinLattice l;
    l.positions = {Vector3d(0, 0, 3.0)};
    l.eta = {70.0};
    l.seed = 0;
    PulseSequence seq;
    seq.rabi = 150.0;
    seq.t_kick = 1e-3;
    seq.t_dd = 1e-3;
    TogglingOptions opts;
    opts.n_cycles = 37;
    EffectiveHamiltonian h = build_toggling_hamiltonian(l, seq, opts);
    CHECK(h.pairs.empty());
    REQUIRE(h.site_fields.size() == 1);
    SiteKick kick = compose_single_particle_kick(seq.rabi, 70.0, seq.t_kick, seq.t_dd);
    const double folded = std::fmod(kick.theta_eff * 37, 2 * M_PI);
    CHECK(h.site_fields[0].norm() ==
          doctest::Approx(folded / 37 / (2 * M_PI * seq.period())).epsilon(1e-12));
}

TEST_CASE("kick angles at pi are rejected toward the PI kind") {
    SpinLattice l = build_chain(2, 1.0, 0.0, -1.0, 0.0, 0);
    PulseSequence seq;
    seq.rabi = 100.0;
    seq.t_kick = 1.0 / 200.0;  // exactly pi
    seq.t_dd = 1e-3;
    CHECK_THROWS_AS(build_toggling_hamiltonian(l, seq), std::domain_error);
}
