#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "spintex/effective.hpp"
#include "spintex/geometry.hpp"
#include "spintex/timeseries.hpp"

namespace spintex {

/// Classical unit-spin ensemble: independent lattice configurations, each
/// carrying a bundle of initial-state trajectories.
struct ClassicalEnsemble {
    struct Configuration {
        SpinLattice lattice;
        EffectiveHamiltonian hamiltonian;               // pair tensors + site fields
        std::vector<std::vector<Vector3d>> trajectories;  // [trajectory][site]
    };
    std::vector<Configuration> configs;

    std::size_t n_trajectories() const {
        return configs.empty() ? 0 : configs.front().trajectories.size();
    }
};

/// Heatbath draw of one spin configuration from the weight exp(mu_n I^x_n):
/// I^x = -1 + log(1 + u (e^{2 mu} - 1))/mu (inverse CDF on [-1, 1]), with the
/// transverse components uniform on the remaining circle. `legacy_range`
/// reproduces the unshifted variant (range [0, 2], clamped) for comparison.
std::vector<Vector3d> heatbath_sample(const std::vector<double>& mu_profile, std::uint64_t seed,
                                      bool legacy_range = false);

/// Domain-wall chemical potential: mu inside r_pol, zero outside.
std::vector<double> domain_wall_mu(const SpinLattice& lattice, double mu, double r_pol);

/// Hamilton equations of motion dI_k/dt = I_k x grad_k H with
/// grad_k H = sum_l M_kl I_l + f_k, in rad/s (2 pi applied here).
void classical_derivative(const std::vector<Vector3d>& spins,
                          const EffectiveHamiltonian& hamiltonian,
                          std::vector<Vector3d>& torque);

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double dt_initial = 0.0;  // 0: auto
    double dt_max = 0.0;      // 0: unbounded
};

/// Coarse-grained polarization in (r, theta) bins.
struct PolarizationMap {
    double t = 0.0;
    std::vector<double> r_edges;
    std::vector<double> theta_edges;
    std::vector<double> mean_x;  // row-major [r][theta]; valid only where count > 0
    std::vector<long> count;

    int n_r() const { return static_cast<int>(r_edges.size()) - 1; }
    int n_theta() const { return static_cast<int>(theta_edges.size()) - 1; }
    double& mean_at(int ir, int it) { return mean_x[ir * n_theta() + it]; }
    long& count_at(int ir, int it) { return count[ir * n_theta() + it]; }
    double mean_at(int ir, int it) const { return mean_x[ir * n_theta() + it]; }
    long count_at(int ir, int it) const { return count[ir * n_theta() + it]; }
};

struct BinSpec {
    int n_r = 16;
    double r_min = 0.0;
    double r_max = 10.0;
    int n_theta = 8;
    bool fold_theta = true;  // use the 3cos^2-1 symmetry: theta ~ pi - theta
};

/// Per-site sample with its ensemble-averaged x polarization.
struct SiteSample {
    Vector3d position;
    double mean_x;
    long weight;  // number of ensemble members averaged
};

PolarizationMap coarse_grain(const std::vector<SiteSample>& samples, const BinSpec& spec,
                             double t = 0.0);

struct ClassicalRunResult {
    TimeSeriesRecord record;          // sum_Ix (per spin and total), energy, drift channels
    std::vector<PolarizationMap> maps;  // one per snapshot time
    std::vector<std::vector<SiteSample>> snapshots;  // raw per-site averages per snapshot
    double max_norm_drift_rate = 0.0;   // per unit |J| t
    double max_energy_drift_rate = 0.0; // relative, per unit |J| t
};

/// Integrate the full ensemble with adaptive RK45; snapshots and maps are
/// taken at snapshot_times (must be a subset region of t_grid coverage).
ClassicalRunResult classical_evolve(const ClassicalEnsemble& ensemble,
                                    const std::vector<double>& t_grid,
                                    const std::vector<double>& snapshot_times,
                                    const BinSpec& bins, const IntegratorOptions& opts = {},
                                    double j_scale = 1.0);

}  // namespace spintex
