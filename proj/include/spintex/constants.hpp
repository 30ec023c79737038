#pragma once

#include <cmath>

namespace spintex {

/// Unit conventions used throughout:
///   * energies, couplings, Rabi frequencies and dissipation rates in Hz,
///   * times in seconds,
///   * distances in nm,
///   * the 2*pi converting Hz to angular frequency is applied only inside
///     propagators and rotation-angle formulas, never stored in tables.
struct PhysicalConstants {
    double gamma_n;  ///< nuclear gyromagnetic ratio, rad/s/T
    double gamma_e;  ///< electron gyromagnetic ratio, rad/s/T
    double J_exp;    ///< internuclear dipolar prefactor mu0*hbar*gamma_n^2/4pi, Hz nm^3
    double K_exp;    ///< electron-nuclear prefactor mu0*hbar*gamma_n*gamma_e/4pi, Hz nm^3

    static constexpr double mu0_over_4pi = 1.0e-7;        // T m / A
    static constexpr double hbar = 1.054571817e-34;       // J s

    /// 13C nuclei around an NV electron.
    static PhysicalConstants carbon13() {
        PhysicalConstants c{};
        c.gamma_n = 2.0 * M_PI * 10.7084e6;    // rad/s/T
        c.gamma_e = 2.0 * M_PI * 28.024951e9;  // rad/s/T
        c.J_exp = dipolar_prefactor(c.gamma_n, c.gamma_n);
        c.K_exp = dipolar_prefactor(c.gamma_n, c.gamma_e);
        return c;
    }

    /// mu0 hbar g1 g2 / 4pi expressed in Hz nm^3.
    static double dipolar_prefactor(double g1, double g2) {
        const double joule_m3 = mu0_over_4pi * hbar * g1 * g2;  // rad/s m^3
        return joule_m3 / (2.0 * M_PI) * 1.0e27;                // Hz nm^3
    }
};

}  // namespace spintex
