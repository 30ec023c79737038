#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "spintex/constants.hpp"
#include "spintex/pulse.hpp"

namespace spintex {

/// On-site potential of a 1D toy chain,
///   phi_n / scale = min(1/|n - n_nv|^3, phi_max_u) - delta_theta,
/// i.e. the 1/r^3 profile shifted by delta_theta and truncated at
/// (phi_max_u - delta_theta) as n -> n_nv. Distances are measured in
/// units of site_spacing.
struct PotentialProfile {
    std::vector<double> phi;   // per site, Hz
    double scale = 1.0;        // Hz, energy unit of the profile
    double phi_max_u = 0.0;    // truncation in units of scale
    double delta_theta = 0.0;  // asymptotic offset (dimensionless shift)
    int n_nv = 0;              // site index of the defect
    double site_spacing = 1.0;

    /// Site distance |n - n_nv| at which phi changes sign (delta_theta > 0).
    std::optional<double> crossing_site() const {
        if (delta_theta <= 0.0) return std::nullopt;
        return std::cbrt(1.0 / delta_theta) / site_spacing;
    }

    double operator[](int n) const { return phi[n]; }
    int size() const { return static_cast<int>(phi.size()); }
};

/// Build the truncated toy profile for an n_sites chain.
PotentialProfile toy_profile(int n_sites, int n_nv, double delta_theta, double phi_max_u,
                             double scale_hz, double site_spacing = 1.0);

/// A constant profile phi_n = value (Hz).
PotentialProfile constant_profile(int n_sites, double value_hz);

enum class CrossingModel {
    linearized,  ///< phi(r) = eta(r) + delta_theta/(2 pi tau), the weak-field form
    composed,    ///< theta_eff(r) = pi of the composed single-particle kick
};

/// Radius (nm) at which the effective on-site potential changes sign, on the
/// reference slice |3 cos^2 theta - 1| = 1; the angular surface follows as
/// r_c(theta) = r_c0 * cbrt|3 cos^2 theta - 1|. Returns nullopt if the
/// potential does not change sign in the bracketing window.
std::optional<double> crossing_radius_r0(const PulseSequence& seq, double electron_polarization,
                                         CrossingModel model = CrossingModel::linearized,
                                         const PhysicalConstants& constants = PhysicalConstants::carbon13(),
                                         double r_lo = 1.7, double r_hi = 50.0, double tol = 1e-4);

/// r_c at a given polar angle.
std::optional<double> crossing_radius(const PulseSequence& seq, double electron_polarization,
                                      double theta,
                                      CrossingModel model = CrossingModel::linearized,
                                      const PhysicalConstants& constants = PhysicalConstants::carbon13());

/// Volume (nm^3) enclosed by the angular crossing surface r < r_c(theta),
/// computed by quadrature over the polar angle.
double crossing_surface_volume(double r_c0, int n_theta = 20001);

/// Expected number of spins within the crossing radius: spin density (1/nm^3)
/// times the ball bounded by the outermost extent r_c(0) = cbrt(2) r_c0.
double spins_within_radius(double density_per_nm3, double r_c0);

}  // namespace spintex
