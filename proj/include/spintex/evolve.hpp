#pragma once

#include <vector>

#include "spintex/geometry.hpp"
#include "spintex/pulse.hpp"
#include "spintex/state.hpp"
#include "spintex/timeseries.hpp"

namespace spintex {

/// Which channels an evolution run should record.
struct ObservableRequest {
    bool total_x = true;      // "sum_Ix"
    bool site_x = false;      // "site_Ix"[k]
    bool site_yz = false;     // "site_Iy"[k], "site_Iz"[k] (with site_x)
    bool energy = false;      // "energy"
    bool bond_energy = false; // "bond_h"[k], chains only
};

struct EvolveResult {
    TimeSeriesRecord record;
    QuantumState final_state;
};

/// Exact evolution under a static effective Hamiltonian (eigendecomposition
/// for density matrices, spectral phases per trajectory for bundles; chains
/// with pure-state bundles use split-step gates).
EvolveResult evolve_effective(const QuantumState& state, const EffectiveHamiltonian& hamiltonian,
                              const std::vector<double>& t_grid, const ObservableRequest& request);

/// Stroboscopic Floquet evolution: per cycle
///   U = exp(-i 2pi H_full t_dd) exp(-i 2pi H_kick t_kick),
/// H_full = H_dd + sum eta_j I^z_j, H_kick = Omega sum I^x_j + sum eta_j I^z_j
/// (dipolar couplings neglected during the kick). Observables are recorded at
/// the stroboscopic times n tau for the requested cycle indices.
EvolveResult evolve_kicked(const QuantumState& state, const SpinLattice& lattice,
                           const PulseSequence& sequence, const std::vector<int>& sample_cycles,
                           const ObservableRequest& request);

/// Evenly or log-spaced cycle indices up to n_cycles.
std::vector<int> sample_cycle_indices(int n_cycles, int n_samples, bool log_spacing);

}  // namespace spintex
