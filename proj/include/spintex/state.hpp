#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spintex/spinops.hpp"

namespace spintex {

enum class Representation { density_matrix, trajectory_bundle };

/// Either a dense density matrix or a bundle of weighted pure states.
struct QuantumState {
    int n_spins = 0;
    Representation rep = Representation::density_matrix;

    MatrixXcd rho;                 // density_matrix
    std::vector<VectorXcd> kets;   // trajectory_bundle
    std::vector<double> weights;   // sum to 1

    std::size_t dim() const { return std::size_t{1} << n_spins; }

    double trace() const;
    /// Smallest eigenvalue of rho (density representation only).
    double min_eigenvalue() const;

    Eigen::Vector3d site_spin(int k) const;
    double total_spin_x() const;
    double energy(const BlockHamiltonian& h) const;
    std::vector<double> bond_energy(const BlockHamiltonian& h,
                                    const std::vector<Matrix4cd>& bonds) const;
};

/// Product-state polarization profile rho = prod (1 + p_n sigma.axis)/2.
struct InitialStateSpec {
    std::vector<double> profile;  // p_n in [-1, 1]
    Eigen::Vector3d axis = Eigen::Vector3d::UnitX();

    void validate() const;

    static InitialStateSpec uniform(int n_spins, int n_polarized, double p, int first = 0);
    /// n_plus sites at p_plus starting at `first`, then n_minus at p_minus.
    static InitialStateSpec domain_wall(int n_spins, int n_plus, double p_plus, int n_minus,
                                        double p_minus, int first = 0);
};

constexpr int max_density_spins = 14;
constexpr int max_bundle_spins = 20;

QuantumState prepare_state(const InitialStateSpec& spec, int n_spins,
                           Representation rep = Representation::density_matrix,
                           int n_trajectories = 0, std::uint64_t seed = 0);

}  // namespace spintex
