#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>

namespace spintex {

/// Periodic spin-locking drive: a resonant kick of Rabi frequency `rabi`
/// (Hz) and duration t_kick, followed by free evolution for t_dd.
struct PulseSequence {
    double rabi = 0.0;      // Hz
    double t_kick = 0.0;    // s
    double t_dd = 0.0;      // s
    double detuning = 0.0;  // Hz

    double period() const { return t_kick + t_dd; }
    /// Nominal kick angle Omega * t_kick in rad (recomputed, never stored).
    double kick_angle() const { return 2.0 * M_PI * rabi * t_kick; }
    /// Kick angle folded into [0, 2pi).
    double kick_angle_mod() const {
        double th = std::fmod(kick_angle(), 2.0 * M_PI);
        return th < 0.0 ? th + 2.0 * M_PI : th;
    }
    /// Deviation of the folded kick angle from pi.
    double delta_theta() const { return kick_angle_mod() - M_PI; }

    void validate() const;

    /// Sequence realizing a target folded angle: the pulse sweeps
    /// full_turns whole rotations plus `theta` (rad) at the given Rabi
    /// frequency; t_kick follows from these.
    static PulseSequence from_kick_angle(double theta, double rabi_hz, double t_dd_s,
                                         int full_turns = 0);
};

/// One-particle unitary exp(-i theta_eff n.I) combining the kick and the
/// site-field z rotation of a full drive period.
struct SiteKick {
    double theta_eff = 0.0;          // rad, in [0, 2pi)
    Eigen::Vector3d axis = Eigen::Vector3d::UnitX();
    bool degenerate = false;         // identity kick flagged, axis fixed to x by convention
};

/// Compose exp(-i 2pi eta t_dd I^z) * exp(-i 2pi t_kick (Omega I^x + eta I^z))
/// into a single rotation. Omega and eta in Hz.
SiteKick compose_single_particle_kick(double rabi_hz, double eta_hz, double t_kick, double t_dd);

/// Cycle-averaged dephasing factors
///   G_c(N, theta) = (1/N) sum_{j=1..N} cos(j theta),
///   G_s(N, theta) = (1/N) sum_{j=1..N} sin(j theta),
/// with the exact limit (G_c, G_s) -> (1, 0) at theta = 2 pi k.
std::pair<double, double> dephasing_sums(int n_cycles, double theta);

/// Large-N limits: G_c -> 1 exactly on the 2pi grid and 0 elsewhere, G_s -> 0.
double dephasing_cos_limit(double theta, double tol = 1e-12);

}  // namespace spintex
