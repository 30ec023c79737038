#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "spintex/geometry.hpp"
#include "spintex/potential.hpp"
#include "spintex/pulse.hpp"

namespace spintex {

enum class HamiltonianKind { SL, PI, TOGGLING_FULL, TOY_PI, TOY_PIHALF };

/// Quadratic spin Hamiltonian H = sum_{pairs} I_i^T M_ij I_j + sum_k f_k . I_k
/// with all coefficients in Hz (I = sigma/2; 2 pi enters only in propagators).
struct EffectiveHamiltonian {
    HamiltonianKind kind = HamiltonianKind::SL;
    int n_spins = 0;

    struct PairTensor {
        int i;
        int j;
        Eigen::Matrix3d m;  // Hz, includes the coupling strength
    };
    std::vector<PairTensor> pairs;
    std::vector<Eigen::Vector3d> site_fields;  // Hz
    /// Per-site kick axes (populated for TOGGLING_FULL; the conserved charge
    /// is sum_k axes[k] . I_k).
    std::vector<Eigen::Vector3d> axes;

    /// True if couplings connect only nearest neighbors (k, k+1).
    bool is_chain() const {
        for (const auto& p : pairs)
            if (p.j != p.i + 1) return false;
        return true;
    }

    /// x components of the site fields (the phi_k of the pi-regime models).
    std::vector<double> phi_x() const {
        std::vector<double> out(site_fields.size());
        for (std::size_t k = 0; k < site_fields.size(); ++k) out[k] = site_fields[k].x();
        return out;
    }
};

/// Spin-locking average Hamiltonian: per pair -(1/2) b_kl (3 x x^T - 1),
/// conserves total I^x. Zero site fields.
EffectiveHamiltonian build_sl_hamiltonian(const SpinLattice& lattice);

/// Same pair structure as SL on a toy chain, tagged as the pi/2-kick model.
EffectiveHamiltonian build_pihalf_hamiltonian(const SpinLattice& lattice);

/// Pi-regime Hamiltonian: bare dipolar pair tensors b_kl (3 z z^T - 1) plus an
/// x on-site potential. With a profile the fields are taken from it (TOY_PI);
/// without one they follow the linearized form eta(r) + delta_theta/(2 pi tau)
/// evaluated from the lattice defect field (PI).
EffectiveHamiltonian build_pi_hamiltonian(const SpinLattice& lattice,
                                          const std::optional<PulseSequence>& sequence,
                                          const std::optional<PotentialProfile>& profile);

struct TogglingOptions {
    /// Number of drive cycles entering the dephasing factors; 0 selects the
    /// large-N limit (site fields vanish, cosine factors become 0/1).
    int n_cycles = 0;
    double theta_pi_tolerance = 1e-3;  // reject sites this close to a pi kick
};

/// Leading-order toggling-frame average of the dipolar Hamiltonian for an
/// arbitrary site-resolved kick (theta_j != pi regime). Conserves
/// sum_k n_k . I_k.
EffectiveHamiltonian build_toggling_hamiltonian(const SpinLattice& lattice,
                                                const PulseSequence& sequence,
                                                const TogglingOptions& opts = {});

/// Dense finite-N pair tensor (1/N) sum_l r^T(l theta_k, n_k) D r(l theta_l, n_l)
/// in closed form; n_cycles = 0 gives the large-N limit.
Eigen::Matrix3d toggling_pair_tensor(double theta_k, const Eigen::Vector3d& n_k,
                                     double theta_l, const Eigen::Vector3d& n_l,
                                     int n_cycles);

}  // namespace spintex
