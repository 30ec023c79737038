#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <unsupported/Eigen/MatrixFunctions>

#include "spintex/pulse.hpp"

using namespace spintex;
using Eigen::Matrix2cd;
using Complex = std::complex<double>;

namespace {

Matrix2cd sigma_x() { return (Matrix2cd() << 0, 1, 1, 0).finished(); }
Matrix2cd sigma_y() {
    return (Matrix2cd() << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0)).finished();
}
Matrix2cd sigma_z() { return (Matrix2cd() << 1, 0, 0, -1).finished(); }

/// Brute-force product exp(-i 2pi eta t_dd I^z) exp(-i 2pi t_k (Omega I^x + eta I^z)).
Matrix2cd composed_unitary(double rabi, double eta, double t_kick, double t_dd) {
    const Matrix2cd hz = 0.5 * 2 * M_PI * eta * sigma_z();
    const Matrix2cd hk = 0.5 * 2 * M_PI * (rabi * sigma_x() + eta * sigma_z());
    return (Complex(0, -t_dd) * hz).exp() * (Complex(0, -t_kick) * hk).exp();
}

Matrix2cd kick_unitary(const SiteKick& k) {
    const Matrix2cd n_dot_sigma =
        k.axis.x() * sigma_x() + k.axis.y() * sigma_y() + k.axis.z() * sigma_z();
    return (Complex(0, -0.5 * k.theta_eff) * n_dot_sigma).exp();
}

double fidelity(const Matrix2cd& u, const Matrix2cd& v) {
    return std::abs((u.adjoint() * v).trace()) / 2.0;
}

}  // namespace

TEST_CASE("pulse sequence bookkeeping") {
    PulseSequence seq;
    seq.rabi = 10e3;
    seq.t_kick = 25e-6;  // 2pi * 10kHz * 25us = pi/2
    seq.t_dd = 40e-6;
    CHECK(seq.kick_angle() == doctest::Approx(M_PI / 2).epsilon(1e-12));
    CHECK(seq.period() == doctest::Approx(65e-6));
    CHECK(seq.delta_theta() == doctest::Approx(M_PI / 2 - M_PI));

    PulseSequence multi = PulseSequence::from_kick_angle(0.94 * M_PI, 50e3, 51e-6, 4);
    CHECK(multi.kick_angle_mod() == doctest::Approx(0.94 * M_PI).epsilon(1e-12));
    CHECK(multi.kick_angle() == doctest::Approx(2 * M_PI * 4 + 0.94 * M_PI).epsilon(1e-12));
}

TEST_CASE("kick composition limits") {
    SUBCASE("eta = 0 is a pure x rotation by Omega t_kick") {
        SiteKick k = compose_single_particle_kick(10e3, 0.0, 25e-6, 40e-6);
        CHECK(k.theta_eff == doctest::Approx(M_PI / 2).epsilon(1e-12));
        CHECK(k.axis.x() == doctest::Approx(1.0));
        CHECK(std::abs(k.axis.y()) < 1e-14);
        CHECK(std::abs(k.axis.z()) < 1e-14);
    }
    SUBCASE("Omega = 0 composes the two z rotations") {
        SiteKick k = compose_single_particle_kick(0.0, 3e3, 50e-6, 40e-6);
        CHECK(k.theta_eff == doctest::Approx(2 * M_PI * 3e3 * 90e-6).epsilon(1e-12));
        CHECK(k.axis.z() == doctest::Approx(1.0));
    }
    SUBCASE("both zero is rejected") {
        CHECK_THROWS(compose_single_particle_kick(0.0, 0.0, 1e-6, 1e-6));
    }
    SUBCASE("identity kick is flagged degenerate with the x-axis convention") {
        // full 2pi z rotation
        SiteKick k = compose_single_particle_kick(0.0, 1e3, 0.5e-3, 0.5e-3);
        CHECK(k.degenerate);
        CHECK(k.theta_eff == 0.0);
        CHECK(k.axis.x() == 1.0);
    }
}

TEST_CASE("generic kick composition matches the 2x2 product") {
    SiteKick k = compose_single_particle_kick(10e3, 3e3, 50e-6, 40e-6);
    Matrix2cd u = composed_unitary(10e3, 3e3, 50e-6, 40e-6);
    CHECK(fidelity(u, kick_unitary(k)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unitary fidelity across a 100-point parameter grid") {
    int idx = 0;
    for (double rabi : {2e3, 10e3, 47e3, 80e3}) {
        for (double eta : {-8e3, -1e3, 0.5e3, 5e3, 20e3}) {
            for (double t_kick : {5e-6, 30e-6, 95e-6, 140e-6, 220e-6}) {
                const double t_dd = 51e-6;
                SiteKick k = compose_single_particle_kick(rabi, eta, t_kick, t_dd);
                Matrix2cd u = composed_unitary(rabi, eta, t_kick, t_dd);
                INFO("grid point ", idx, ": rabi=", rabi, " eta=", eta, " t_kick=", t_kick);
                CHECK(std::abs(1.0 - fidelity(u, kick_unitary(k))) < 1e-12);
                ++idx;
            }
        }
    }
    CHECK(idx == 100);
}

TEST_CASE("dephasing sums against direct summation") {
    for (int n : {1, 2, 3, 4, 7, 50, 333}) {
        for (double th : {0.05, 0.3, M_PI / 2, 1.7, M_PI, 5.9, 2 * M_PI}) {
            double sc = 0.0, ss = 0.0;
            for (int j = 1; j <= n; ++j) {
                sc += std::cos(j * th);
                ss += std::sin(j * th);
            }
            auto [gc, gs] = dephasing_sums(n, th);
            CHECK(gc == doctest::Approx(sc / n).epsilon(1e-9));
            CHECK(gs == doctest::Approx(ss / n).epsilon(1e-9));
        }
    }
}

TEST_CASE("dephasing sums special values") {
    SUBCASE("N = 4, theta = pi/2 has vanishing cosine sum") {
        auto [gc, gs] = dephasing_sums(4, M_PI / 2);
        CHECK(std::abs(gc) < 1e-14);
    }
    SUBCASE("theta = 2 pi k returns the exact limit (1, 0)") {
        for (int n : {1, 5, 100}) {
            auto [gc, gs] = dephasing_sums(n, 2 * M_PI);
            CHECK(gc == 1.0);
            CHECK(gs == 0.0);
        }
        auto [gc, gs] = dephasing_sums(7, 4 * M_PI);
        CHECK(gc == 1.0);
    }
    SUBCASE("large-N envelope |G| <= 1/(N |sin(theta/2)|)") {
        const double th = 0.3;
        for (int n : {100, 1000, 10000}) {
            auto [gc, gs] = dephasing_sums(n, th);
            const double bound = 1.0 / (n * std::abs(std::sin(th / 2)));
            CHECK(std::abs(gc) <= bound + 1e-15);
            CHECK(std::abs(gs) <= bound + 1e-15);
        }
    }
    SUBCASE("large-N limit helper") {
        CHECK(dephasing_cos_limit(0.0) == 1.0);
        CHECK(dephasing_cos_limit(2 * M_PI) == 1.0);
        CHECK(dephasing_cos_limit(1.0) == 0.0);
        CHECK(dephasing_cos_limit(M_PI) == 0.0);
    }
}
