#include "spintex/potential.hpp"

#include <stdexcept>

namespace spintex {

PotentialProfile toy_profile(int n_sites, int n_nv, double delta_theta, double phi_max_u,
                             double scale_hz, double site_spacing) {
    if (n_sites < 1) throw std::invalid_argument("toy_profile: n_sites must be >= 1");
    if (phi_max_u <= 0.0) throw std::invalid_argument("toy_profile: phi_max_u must be > 0");
    PotentialProfile p;
    p.scale = scale_hz;
    p.phi_max_u = phi_max_u;
    p.delta_theta = delta_theta;
    p.n_nv = n_nv;
    p.site_spacing = site_spacing;
    p.phi.resize(n_sites);
    for (int n = 0; n < n_sites; ++n) {
        const double d = std::abs(n - n_nv) * site_spacing;
        const double inv3 = d > 0.0 ? 1.0 / (d * d * d) : std::numeric_limits<double>::infinity();
        p.phi[n] = scale_hz * (std::min(inv3, phi_max_u) - delta_theta);
    }
    return p;
}

PotentialProfile constant_profile(int n_sites, double value_hz) {
    PotentialProfile p;
    p.scale = value_hz;
    p.phi_max_u = 1.0;
    p.phi.assign(n_sites, value_hz);
    return p;
}

namespace {

/// Effective potential (arbitrary sign-carrying units) as a function of radius
/// on the |3cos^2 - 1| = 1 slice.
double potential_at(double r, const PulseSequence& seq, double pol, CrossingModel model,
                    const PhysicalConstants& c) {
    const double eta_hz = 2.0 * pol * c.K_exp / (r * r * r);
    if (model == CrossingModel::linearized) {
        // eta(r) + epsilon/tau with both terms in Hz.
        return eta_hz + seq.delta_theta() / (2.0 * M_PI * seq.period());
    }
    // Composed kick: theta_eff(r) = pi exactly where the half-angle cosine of
    // the composed rotation vanishes. Evaluated directly so the function stays
    // continuous in r (no 2 pi folding).
    const double omega = 2.0 * M_PI * seq.rabi;
    const double eta = 2.0 * M_PI * eta_hz;
    const double w = std::sqrt(omega * omega + eta * eta);
    const double alpha = seq.t_kick * w;
    const double zeta = eta * seq.t_dd;
    return std::cos(alpha / 2) * std::cos(zeta / 2) - (eta / w) * std::sin(alpha / 2) * std::sin(zeta / 2);
}

}  // namespace

std::optional<double> crossing_radius_r0(const PulseSequence& seq, double electron_polarization,
                                         CrossingModel model, const PhysicalConstants& constants,
                                         double r_lo, double r_hi, double tol) {
    seq.validate();
    if (electron_polarization < 0.0 || electron_polarization > 1.0)
        throw std::invalid_argument("crossing_radius: polarization must be in [0, 1]");

    // Dense scan for the outermost sign change, then bisection.
    const int n_scan = 4000;
    double prev_r = r_hi;
    double prev_v = potential_at(r_hi, seq, electron_polarization, model, constants);
    double a = 0.0, b = 0.0;
    bool found = false;
    for (int i = 1; i <= n_scan; ++i) {
        const double r = r_hi + (r_lo - r_hi) * i / n_scan;
        const double v = potential_at(r, seq, electron_polarization, model, constants);
        if (v == 0.0) return r;
        if (std::signbit(v) != std::signbit(prev_v)) {
            a = r;
            b = prev_r;
            found = true;
            break;
        }
        prev_r = r;
        prev_v = v;
    }
    if (!found) return std::nullopt;

    double fa = potential_at(a, seq, electron_polarization, model, constants);
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double fm = potential_at(m, seq, electron_polarization, model, constants);
        if (fm == 0.0) return m;
        if (std::signbit(fm) == std::signbit(fa)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

std::optional<double> crossing_radius(const PulseSequence& seq, double electron_polarization,
                                      double theta, CrossingModel model,
                                      const PhysicalConstants& constants) {
    auto r0 = crossing_radius_r0(seq, electron_polarization, model, constants);
    if (!r0) return std::nullopt;
    const double c = std::cos(theta);
    return *r0 * std::cbrt(std::abs(3.0 * c * c - 1.0));
}

double crossing_surface_volume(double r_c0, int n_theta) {
    if (r_c0 <= 0.0) return 0.0;
    // V = 2 pi / 3 * rc0^3 * int_{-1}^{1} |3u^2 - 1| du by trapezoid rule.
    double integral = 0.0;
    double prev = std::abs(3.0 * 1.0 - 1.0);
    for (int i = 1; i < n_theta; ++i) {
        const double u = -1.0 + 2.0 * i / (n_theta - 1);
        const double f = std::abs(3.0 * u * u - 1.0);
        integral += 0.5 * (prev + f) * (2.0 / (n_theta - 1));
        prev = f;
    }
    return 2.0 * M_PI / 3.0 * r_c0 * r_c0 * r_c0 * integral;
}

double spins_within_radius(double density_per_nm3, double r_c0) {
    if (density_per_nm3 < 0.0) throw std::invalid_argument("spins_within_radius: density must be >= 0");
    if (r_c0 <= 0.0) return 0.0;
    const double r_outer = std::cbrt(2.0) * r_c0;  // r_c(theta = 0)
    return density_per_nm3 * 4.0 / 3.0 * M_PI * r_outer * r_outer * r_outer;
}

}  // namespace spintex
