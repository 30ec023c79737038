#include "spintex/pulse.hpp"

#include <stdexcept>

namespace spintex {

void PulseSequence::validate() const {
    if (period() <= 0.0) throw std::invalid_argument("PulseSequence: period must be > 0");
    if (rabi < 0.0) throw std::invalid_argument("PulseSequence: rabi must be >= 0");
    if (t_kick < 0.0 || t_dd < 0.0)
        throw std::invalid_argument("PulseSequence: durations must be >= 0");
}

PulseSequence PulseSequence::from_kick_angle(double theta, double rabi_hz, double t_dd_s,
                                             int full_turns) {
    if (rabi_hz <= 0.0) throw std::invalid_argument("from_kick_angle: rabi must be > 0");
    PulseSequence seq;
    seq.rabi = rabi_hz;
    seq.t_dd = t_dd_s;
    seq.t_kick = (2.0 * M_PI * full_turns + theta) / (2.0 * M_PI * rabi_hz);
    return seq;
}

SiteKick compose_single_particle_kick(double rabi_hz, double eta_hz, double t_kick, double t_dd) {
    if (rabi_hz == 0.0 && eta_hz == 0.0)
        throw std::invalid_argument("compose_single_particle_kick: Omega and eta both zero");

    const double omega = 2.0 * M_PI * rabi_hz;  // rad/s
    const double eta = 2.0 * M_PI * eta_hz;     // rad/s
    const double w = std::sqrt(omega * omega + eta * eta);
    const double alpha = t_kick * w;            // kick rotation angle
    const double zeta = eta * t_dd;             // free z rotation angle

    const double ca = std::cos(alpha / 2), sa = std::sin(alpha / 2);
    const double cz = std::cos(zeta / 2), sz = std::sin(zeta / 2);
    // cos(theta_eff/2) of the composed rotation; axis components come from the
    // -i sin(theta/2) n.sigma part of the 2x2 product.
    const double c_half = ca * cz - (eta / w) * sa * sz;
    const double x_half = (omega / w) * sa * cz;
    const double y_half = (omega / w) * sa * sz;
    const double z_half = (eta / w) * sa * cz + ca * sz;
    const double s_half = std::sqrt(x_half * x_half + y_half * y_half + z_half * z_half);

    SiteKick kick;
    if (s_half < 1e-15) {
        kick.theta_eff = 0.0;
        kick.axis = Eigen::Vector3d::UnitX();
        kick.degenerate = true;
        return kick;
    }
    double theta = 2.0 * std::atan2(s_half, c_half);
    if (theta < 0.0) theta += 4.0 * M_PI;
    kick.theta_eff = std::fmod(theta, 2.0 * M_PI);
    kick.axis = Eigen::Vector3d(x_half, y_half, z_half) / s_half;
    return kick;
}

std::pair<double, double> dephasing_sums(int n_cycles, double theta) {
    if (n_cycles < 1) throw std::invalid_argument("dephasing_sums: n_cycles must be >= 1");
    const double n = n_cycles;
    double x = std::fmod(theta, 2.0 * M_PI);
    if (x < 0.0) x += 2.0 * M_PI;
    if (std::min(x, 2.0 * M_PI - x) < 1e-12) return {1.0, 0.0};
    // Lagrange forms of the Dirichlet sums, divided by N.
    const double pref = std::sin(n * theta / 2.0) / (n * std::sin(theta / 2.0));
    return {pref * std::cos((n + 1) * theta / 2.0), pref * std::sin((n + 1) * theta / 2.0)};
}

double dephasing_cos_limit(double theta, double tol) {
    double x = std::fmod(theta, 2.0 * M_PI);
    if (x < 0.0) x += 2.0 * M_PI;
    return std::min(x, 2.0 * M_PI - x) < tol ? 1.0 : 0.0;
}

}  // namespace spintex
