#pragma once

#include <optional>
#include <vector>

#include "spintex/evolve.hpp"
#include "spintex/geometry.hpp"
#include "spintex/state.hpp"

namespace spintex {

/// Defect-site jump operators L+ = (sigma^x + i sigma^y)/2,
/// L- = (sigma^x - i sigma^y)/2, L_z = sigma^z with rates in Hz.
/// The generator is
///   d rho/dt = 2pi [ -i[H, rho] + sum_j gamma_j (L_j rho L_j^dag
///                                - 1/2 {L_j^dag L_j, rho}) ],
/// i.e. rates share the cycles-to-radians convention of the Hamiltonian.
struct DissipationSpec {
    int site = 0;
    double gamma_plus = 0.0;   // Hz
    double gamma_minus = 0.0;  // Hz
    double gamma_z = 0.0;      // Hz
    /// Per-site rate multipliers; empty means single-site at `site`.
    std::vector<double> site_scale;

    bool any() const { return gamma_plus > 0.0 || gamma_minus > 0.0 || gamma_z > 0.0; }
    bool equal_rates() const { return gamma_plus == gamma_minus && gamma_minus == gamma_z; }

    /// Multiplier vector resolved for an n-spin system.
    std::vector<double> scales(int n_spins) const;

    static DissipationSpec single_site(int site, double g_plus, double g_minus, double g_z);
    static DissipationSpec isotropic(int site, double gamma) {
        return single_site(site, gamma, gamma, gamma);
    }
    /// Rates scaled as 1/r^6 from the defect, normalized to gamma at the
    /// reference site (the diagonal part of the microscopic master equation).
    static DissipationSpec r6_profile(const SpinLattice& lattice, int reference_site,
                                      double g_plus, double g_minus, double g_z);
};

struct LindbladOptions {
    /// Split-step size; 0 picks a default from the bond frequencies and rates.
    /// Samples are snapped to the step grid.
    double dt = 0.0;
    /// Seed for the jump process in trajectory mode.
    std::uint64_t seed = 0;
};

/// Open-system evolution d rho/dt as above. Density matrices on chains run
/// the split-step engine (exact bond gates + exact local channel); other
/// geometries fall back to adaptive RK integration (small N). Trajectory
/// bundles use jump unraveling and must agree with the density solution
/// within sampling error.
EvolveResult evolve_lindblad(const QuantumState& state, const EffectiveHamiltonian& hamiltonian,
                             const DissipationSpec& dissipation, const std::vector<double>& t_grid,
                             const ObservableRequest& request, const LindbladOptions& opts = {});

/// Exact single-site channel exp(dt D) as a 4x4 superoperator acting on
/// vec(rho1) with index v = a + 2b for rho1(a, b).
Eigen::Matrix4cd single_site_channel(double g_plus_hz, double g_minus_hz, double g_z_hz, double dt);

}  // namespace spintex
