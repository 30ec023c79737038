#pragma once

#include <vector>

#include "spintex/spinops.hpp"

namespace spintex {

/// Split-step machinery for nearest-neighbor chains: exact bond-gate layers
/// (even/odd bonds commute within a layer) in a symmetric second-order
/// arrangement. Site fields are absorbed into the bond partition.
struct ChainGates {
    int n_spins = 0;
    double dt = 0.0;                      // s
    std::vector<Matrix4cd> even_half;     // exp(-i 2pi h_k dt/2), k even
    std::vector<int> even_bonds;
    std::vector<Matrix4cd> odd_full;      // exp(-i 2pi h_k dt), k odd
    std::vector<int> odd_bonds;
};

ChainGates make_chain_gates(const BlockHamiltonian& h, double dt);

/// One second-order step: even(dt/2) odd(dt) even(dt/2).
void trotter_step(VectorXcd& psi, const ChainGates& gates);
void trotter_step(MatrixXcd& rho, const ChainGates& gates);

/// Apply a two-site gate u on (k, k+1): psi <- (u (x) 1) psi.
void apply_pair_gate(VectorXcd& psi, const Matrix4cd& u, int k);
/// rho <- (u (x) 1) rho (u (x) 1)^dag.
void apply_pair_gate(MatrixXcd& rho, const Matrix4cd& u, int k);

/// Default step for a chain: resolves the fastest bond frequency.
double default_trotter_dt(const BlockHamiltonian& h, double angle_per_step = 0.05);

}  // namespace spintex
