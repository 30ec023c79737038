#include <doctest.h>

#include <cmath>

#include "spintex/potential.hpp"
#include "spintex/rng.hpp"

using namespace spintex;

TEST_CASE("toy profile matches the truncated shifted 1/r^3 form pointwise") {
    const double dth = 0.05 * M_PI, phimax = 0.5 * M_PI, scale = 0.025;
    PotentialProfile p = toy_profile(12, 0, dth, phimax, scale);
    for (int n = 0; n < 12; ++n) {
        const double d = n;
        const double inv3 = n == 0 ? phimax : std::min(1.0 / (d * d * d), phimax);
        CHECK(p.phi[n] == doctest::Approx(scale * (inv3 - dth)).epsilon(1e-14));
    }
}

TEST_CASE("profile sign flips exactly once along the chain for delta_theta > 0") {
    PotentialProfile p = toy_profile(20, 0, 0.05 * M_PI, 0.5 * M_PI, 1.0);
    int flips = 0;
    for (int n = 1; n < 20; ++n)
        if (std::signbit(p.phi[n]) != std::signbit(p.phi[n - 1])) ++flips;
    CHECK(flips == 1);
    CHECK(p.phi.front() > 0.0);
    CHECK(p.phi.back() < 0.0);
}

TEST_CASE("profile is monotone decreasing beyond the plateau") {
    PotentialProfile p = toy_profile(30, 0, 0.02, 1.0, 1.0);
    for (int n = 2; n < 30; ++n) CHECK(p.phi[n] <= p.phi[n - 1] + 1e-15);
}

TEST_CASE("crossing site sits where the bare 1/r^3 equals delta_theta") {
    PotentialProfile p = toy_profile(20, 0, 0.05 * M_PI, 0.5 * M_PI, 1.0);
    auto rc = p.crossing_site();
    REQUIRE(rc.has_value());
    CHECK(*rc == doctest::Approx(std::cbrt(1.0 / (0.05 * M_PI))).epsilon(1e-12));
    CHECK_FALSE(toy_profile(20, 0, 0.0, 1.0, 1.0).crossing_site().has_value());
}

TEST_CASE("crossing radius for the reference pulse parameters") {
    // Omega ~ 50 kHz with a four-turn 95 us pulse folding to 0.94 pi, 51 us windows
    PulseSequence seq = PulseSequence::from_kick_angle(0.94 * M_PI, 47052.6315789474, 51e-6, 4);
    CHECK(seq.t_kick == doctest::Approx(95e-6).epsilon(1e-9));
    auto rc = crossing_radius_r0(seq, 0.1);
    REQUIRE(rc.has_value());
    CHECK(*rc == doctest::Approx(2.7).epsilon(0.15 / 2.7));

    SUBCASE("angular dependence") {
        auto rc0 = crossing_radius(seq, 0.1, 0.0);
        REQUIRE(rc0.has_value());
        CHECK(*rc0 == doctest::Approx(*rc * std::cbrt(2.0)).epsilon(1e-12));
        auto rc_magic = crossing_radius(seq, 0.1, std::acos(1.0 / std::sqrt(3.0)));
        CHECK(std::abs(*rc_magic) < 1e-4);  // cbrt leaves ~1e-5 roundoff
    }
}

TEST_CASE("delta_theta = 0 has no crossing") {
    PulseSequence seq = PulseSequence::from_kick_angle(M_PI, 50e3, 51e-6, 0);
    CHECK_FALSE(crossing_radius_r0(seq, 0.1).has_value());
}

TEST_CASE("bisection root agrees with a dense-scan oracle") {
    PulseSequence seq = PulseSequence::from_kick_angle(0.94 * M_PI, 47052.6315789474, 51e-6, 4);
    const double pol = 0.1;
    auto rc = crossing_radius_r0(seq, pol, CrossingModel::linearized);
    REQUIRE(rc.has_value());
    // 10^4-point scan of eta(r) + eps/(2 pi tau)
    const PhysicalConstants c = PhysicalConstants::carbon13();
    const double shift = seq.delta_theta() / (2 * M_PI * seq.period());
    const int n = 10000;
    double found = -1.0;
    double prev = 2 * pol * c.K_exp / (1.7 * 1.7 * 1.7) + shift;
    for (int i = 1; i <= n; ++i) {
        const double r = 1.7 + (50.0 - 1.7) * i / n;
        const double v = 2 * pol * c.K_exp / (r * r * r) + shift;
        if (std::signbit(v) != std::signbit(prev)) {
            found = r;
            break;
        }
        prev = v;
    }
    REQUIRE(found > 0.0);
    CHECK(std::abs(*rc - found) < (50.0 - 1.7) / n + 1e-4);
}

TEST_CASE("composed-kick crossing agrees with its own dense scan") {
    // strong field regime so the composed angle reaches pi inside the window
    PulseSequence seq = PulseSequence::from_kick_angle(0.94 * M_PI, 5e3, 51e-6, 0);
    const double pol = 0.5;
    auto rc = crossing_radius_r0(seq, pol, CrossingModel::composed);
    REQUIRE(rc.has_value());
    // verify theta_eff crosses pi at the root
    const PhysicalConstants c = PhysicalConstants::carbon13();
    auto theta_at = [&](double r) {
        const double eta = 2 * pol * c.K_exp / (r * r * r);
        return compose_single_particle_kick(seq.rabi, eta, seq.t_kick, seq.t_dd).theta_eff;
    };
    CHECK(std::abs(theta_at(*rc) - M_PI) < 1e-3);
    CHECK(theta_at(*rc + 0.05) < M_PI);
}

TEST_CASE("crossing radius shrinks as the kick angle moves away from pi") {
    double prev = 1e30;
    for (double theta : {0.98 * M_PI, 0.94 * M_PI, 0.90 * M_PI, 0.85 * M_PI}) {
        PulseSequence seq = PulseSequence::from_kick_angle(theta, 50e3, 51e-6, 4);
        auto rc = crossing_radius_r0(seq, 0.1);
        REQUIRE(rc.has_value());
        CHECK(*rc < prev);
        prev = *rc;
    }
}

TEST_CASE("spins within the crossing radius") {
    SUBCASE("reference point encloses about 150 spins at 1/nm^3") {
        PulseSequence seq = PulseSequence::from_kick_angle(0.94 * M_PI, 47052.6315789474, 51e-6, 4);
        auto rc = crossing_radius_r0(seq, 0.1);
        REQUIRE(rc.has_value());
        const double n = spins_within_radius(1.0, *rc);
        CHECK(n > 130.0);
        CHECK(n < 170.0);
    }
    SUBCASE("zero radius encloses nothing") { CHECK(spins_within_radius(1.0, 0.0) == 0.0); }
    SUBCASE("surface volume quadrature matches Monte Carlo rejection within 2%") {
        const double rc0 = 2.0;
        const double quad = crossing_surface_volume(rc0);
        Rng rng(5);
        const double box = std::cbrt(2.0) * rc0;
        long hits = 0;
        const long n = 400000;
        for (long i = 0; i < n; ++i) {
            const double x = rng.uniform(-box, box);
            const double y = rng.uniform(-box, box);
            const double z = rng.uniform(-box, box);
            const double r = std::sqrt(x * x + y * y + z * z);
            if (r == 0.0 || r > box) continue;
            const double ct = z / r;
            if (r < rc0 * std::cbrt(std::abs(3 * ct * ct - 1))) ++hits;
        }
        const double mc = 8.0 * box * box * box * hits / n;
        CHECK(quad == doctest::Approx(mc).epsilon(0.02));
    }
}
