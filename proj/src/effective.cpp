#include "spintex/effective.hpp"

#include <stdexcept>

namespace spintex {

namespace {

Eigen::Matrix3d sl_pair_tensor(double b) {
    // -(1/2) b (3 x x^T - 1) = b diag(-1, 1/2, 1/2)
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 0) = -b;
    m(1, 1) = 0.5 * b;
    m(2, 2) = 0.5 * b;
    return m;
}

Eigen::Matrix3d dipolar_pair_tensor(double b) {
    // b (3 z z^T - 1) = b diag(-1, -1, 2)
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 0) = -b;
    m(1, 1) = -b;
    m(2, 2) = 2.0 * b;
    return m;
}

Eigen::Matrix3d cross_matrix(const Eigen::Vector3d& n) {
    Eigen::Matrix3d e;
    e << 0, -n.z(), n.y(),
         n.z(), 0, -n.x(),
         -n.y(), n.x(), 0;
    return e;
}

}  // namespace

EffectiveHamiltonian build_sl_hamiltonian(const SpinLattice& lattice) {
    EffectiveHamiltonian h;
    h.kind = HamiltonianKind::SL;
    h.n_spins = lattice.n_spins();
    h.site_fields.assign(h.n_spins, Eigen::Vector3d::Zero());
    for (const auto& c : lattice.couplings) {
        if (c.b_hz == 0.0) continue;
        h.pairs.push_back({c.i, c.j, sl_pair_tensor(c.b_hz)});
    }
    return h;
}

EffectiveHamiltonian build_pihalf_hamiltonian(const SpinLattice& lattice) {
    EffectiveHamiltonian h = build_sl_hamiltonian(lattice);
    h.kind = HamiltonianKind::TOY_PIHALF;
    return h;
}

EffectiveHamiltonian build_pi_hamiltonian(const SpinLattice& lattice,
                                          const std::optional<PulseSequence>& sequence,
                                          const std::optional<PotentialProfile>& profile) {
    EffectiveHamiltonian h;
    h.n_spins = lattice.n_spins();
    h.site_fields.assign(h.n_spins, Eigen::Vector3d::Zero());
    for (const auto& c : lattice.couplings) {
        if (c.b_hz == 0.0) continue;
        h.pairs.push_back({c.i, c.j, dipolar_pair_tensor(c.b_hz)});
    }
    if (profile) {
        if (profile->size() != h.n_spins)
            throw std::invalid_argument("build_pi_hamiltonian: profile size mismatch");
        h.kind = HamiltonianKind::TOY_PI;
        for (int k = 0; k < h.n_spins; ++k) h.site_fields[k].x() = profile->phi[k];
    } else {
        if (!sequence)
            throw std::invalid_argument("build_pi_hamiltonian: need a sequence or a profile");
        h.kind = HamiltonianKind::PI;
        const double shift_hz = sequence->delta_theta() / (2.0 * M_PI * sequence->period());
        for (int k = 0; k < h.n_spins; ++k) h.site_fields[k].x() = lattice.eta[k] + shift_hz;
    }
    return h;
}

Eigen::Matrix3d toggling_pair_tensor(double theta_k, const Eigen::Vector3d& n_k,
                                     double theta_l, const Eigen::Vector3d& n_l,
                                     int n_cycles) {
    static const Eigen::Vector3d dvec(-1.0, -1.0, 2.0);
    const Eigen::Matrix3d d = dvec.asDiagonal();
    const Eigen::Matrix3d qk = n_k * n_k.transpose();
    const Eigen::Matrix3d ql = n_l * n_l.transpose();
    const Eigen::Matrix3d pk = Eigen::Matrix3d::Identity() - qk;
    const Eigen::Matrix3d pl = Eigen::Matrix3d::Identity() - ql;
    const Eigen::Matrix3d ek = cross_matrix(n_k);
    const Eigen::Matrix3d el = cross_matrix(n_l);

    double gc_k, gs_k, gc_l, gs_l, gc_d, gs_d, gc_s, gs_s;
    const double diff = theta_k - theta_l, sum = theta_k + theta_l;
    if (n_cycles > 0) {
        std::tie(gc_k, gs_k) = dephasing_sums(n_cycles, theta_k);
        std::tie(gc_l, gs_l) = dephasing_sums(n_cycles, theta_l);
        std::tie(gc_d, gs_d) = dephasing_sums(n_cycles, diff);
        std::tie(gc_s, gs_s) = dephasing_sums(n_cycles, sum);
    } else {
        gc_k = dephasing_cos_limit(theta_k);
        gc_l = dephasing_cos_limit(theta_l);
        gc_d = dephasing_cos_limit(diff);
        gc_s = dephasing_cos_limit(sum);
        gs_k = gs_l = gs_d = gs_s = 0.0;
    }

    // Cycle average of r^T(l theta_k, n_k) D r(l theta_l, n_l) with the
    // product-to-sum split of the cos*cos and sin*sin factors.
    Eigen::Matrix3d m = qk * d * ql;
    m += gc_k * (pk * d * ql) + gc_l * (qk * d * pl);
    m += gs_k * (ek.transpose() * d * ql) + gs_l * (qk * d * el);
    m += 0.5 * (gc_d + gc_s) * (pk * d * pl);
    m += 0.5 * (gc_d - gc_s) * (ek.transpose() * d * el);
    m += 0.5 * (gs_s - gs_d) * (pk * d * el);
    m += 0.5 * (gs_s + gs_d) * (ek.transpose() * d * pl);
    return m;
}

EffectiveHamiltonian build_toggling_hamiltonian(const SpinLattice& lattice,
                                                const PulseSequence& sequence,
                                                const TogglingOptions& opts) {
    sequence.validate();
    const int n = lattice.n_spins();
    EffectiveHamiltonian h;
    h.kind = HamiltonianKind::TOGGLING_FULL;
    h.n_spins = n;
    h.site_fields.assign(n, Eigen::Vector3d::Zero());
    h.axes.resize(n);

    std::vector<double> theta(n);
    for (int k = 0; k < n; ++k) {
        SiteKick kick = compose_single_particle_kick(sequence.rabi, lattice.eta[k],
                                                     sequence.t_kick, sequence.t_dd);
        if (std::abs(kick.theta_eff - M_PI) < opts.theta_pi_tolerance)
            throw std::domain_error("build_toggling_hamiltonian: site " + std::to_string(k) +
                                    " has theta_eff within tolerance of pi; use the PI kind");
        theta[k] = kick.theta_eff;
        h.axes[k] = kick.axis;
        if (opts.n_cycles > 0) {
            const double folded = std::fmod(kick.theta_eff * opts.n_cycles, 2.0 * M_PI);
            const double field_hz = folded / opts.n_cycles / (2.0 * M_PI * sequence.period());
            h.site_fields[k] = field_hz * kick.axis;
        }
    }
    for (const auto& c : lattice.couplings) {
        if (c.b_hz == 0.0) continue;
        h.pairs.push_back({c.i, c.j,
                           c.b_hz * toggling_pair_tensor(theta[c.i], h.axes[c.i], theta[c.j],
                                                         h.axes[c.j], opts.n_cycles)});
    }
    return h;
}

}  // namespace spintex
