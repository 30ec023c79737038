#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "spintex/effective.hpp"

namespace spintex {

using Complex = std::complex<double>;
using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Basis convention: bit k of a computational index addresses site k,
/// bit value 0 = spin up (sigma^z = +1). I = sigma/2 throughout.
namespace pauli {
Matrix2cd x();
Matrix2cd y();
Matrix2cd z();
Matrix2cd id();
Matrix2cd component(int axis);                    // 0,1,2 -> x,y,z
Matrix2cd direction(const Eigen::Vector3d& n);    // n . sigma
}  // namespace pauli

/// Hamiltonian as a list of 2-site and 1-site Hermitian blocks (Hz).
/// All engines (dense build, matvec, Trotter gates, expectations) run on
/// this representation.
struct BlockHamiltonian {
    struct PairBlock {
        int i;
        int j;
        Matrix4cd h;  // acting on (site i, site j), i < j
    };
    struct SiteBlock {
        int k;
        Matrix2cd h;
    };

    int n_spins = 0;
    std::vector<PairBlock> pairs;
    std::vector<SiteBlock> sites;

    std::size_t dim() const { return std::size_t{1} << n_spins; }

    static BlockHamiltonian from(const EffectiveHamiltonian& h);

    /// y += H x (matrix-free).
    void apply(const VectorXcd& x, VectorXcd& y) const;

    MatrixXcd dense() const;

    /// Cheap spectral-radius bound from block norms.
    double norm_bound() const;
};

/// 4x4 block sum_ab M_ab I^a (x) I^b for a real 3x3 tensor (Hz).
Matrix4cd pair_block(const Eigen::Matrix3d& m);

/// 2x2 block f . I.
Matrix2cd site_block(const Eigen::Vector3d& f);

/// Bond partition of a nearest-neighbor chain Hamiltonian: bond k carries the
/// pair block of (k, k+1) plus the adjacent site blocks, weighted 1/2 for
/// interior sites and 1 at the chain ends so that sum_k h_k = H exactly.
std::vector<Matrix4cd> chain_bond_blocks(const BlockHamiltonian& h);

// --- reduced density matrices ------------------------------------------------

Matrix2cd one_site_rdm(const MatrixXcd& rho, int k, int n_spins);
Matrix2cd one_site_rdm(const VectorXcd& psi, int k, int n_spins);
Matrix4cd two_site_rdm(const MatrixXcd& rho, int i, int j, int n_spins);  // i < j
Matrix4cd two_site_rdm(const VectorXcd& psi, int i, int j, int n_spins);

// --- expectation values -------------------------------------------------------

/// <(I^x, I^y, I^z)> of site k.
Eigen::Vector3d site_spin(const MatrixXcd& rho, int k, int n_spins);
Eigen::Vector3d site_spin(const VectorXcd& psi, int k, int n_spins);

template <typename State>
double total_spin_x(const State& s, int n_spins) {
    double sum = 0.0;
    for (int k = 0; k < n_spins; ++k) sum += site_spin(s, k, n_spins).x();
    return sum;
}

template <typename State>
double expectation(const State& s, const BlockHamiltonian& h) {
    double e = 0.0;
    for (const auto& p : h.pairs) {
        Matrix4cd rdm = two_site_rdm(s, p.i, p.j, h.n_spins);
        e += (p.h * rdm).trace().real();
    }
    for (const auto& b : h.sites) {
        Matrix2cd rdm = one_site_rdm(s, b.k, h.n_spins);
        e += (b.h * rdm).trace().real();
    }
    return e;
}

/// Per-bond energies <h_{k+1/2}> of a chain Hamiltonian; sums to <H> exactly.
template <typename State>
std::vector<double> bond_energies(const State& s, const BlockHamiltonian& h,
                                  const std::vector<Matrix4cd>& bonds) {
    std::vector<double> out(bonds.size());
    for (std::size_t k = 0; k < bonds.size(); ++k) {
        Matrix4cd rdm = two_site_rdm(s, static_cast<int>(k), static_cast<int>(k) + 1, h.n_spins);
        out[k] = (bonds[k] * rdm).trace().real();
    }
    return out;
}

/// Variance of the spatial energy distribution sum_n (n - nbar)^2 <h_n>/<H>.
/// Unreliable (flag set) when the total energy is near zero.
struct EnergyVariance {
    double value = 0.0;
    double center = 0.0;
    bool reliable = true;
};
EnergyVariance energy_variance(const std::vector<double>& bond_energy,
                               double total_tolerance = 1e-12);

/// Apply a 2x2 operator on site k: psi <- (u_k (x) 1) psi.
void apply_site_op(VectorXcd& psi, const Matrix2cd& u, int k);

}  // namespace spintex
