#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "spintex/effective.hpp"
#include "spintex/potential.hpp"
#include "spintex/state.hpp"
#include "spintex/timeseries.hpp"

namespace spintex {

/// Gaussian kernel of the diffusing energy packet, variance D t, centered at
/// the defect site; t = 0 degenerates to a delta at n_nv.
double gaussian_energy_kernel(double n, double t, double diffusion, double n_nv);

/// Local inverse temperature of the moving-energy Gibbs ansatz,
///   beta_n(t) = -4 <H>_init p_E(n, t) / [(3/2) J_n^2 + (phi_n^2 + phi_{n+1}^2)/2].
double local_beta(int n, double t, const PotentialProfile& profile, double coupling_j,
                  double initial_energy, double diffusion);

/// <H> of the product initial state p_n under the chain model: the site-field
/// part (p/2) sum phi_n p_n, plus the optional O(p^2) bond term.
double chain_initial_energy(const PotentialProfile& profile, const std::vector<double>& p,
                            double coupling_j0, bool include_p2 = false);

struct GibbsCurveParams {
    double coupling_j0 = 0.0;    // disorder-free J_n
    double diffusion = 1.0;      // D, site^2 per time
    double initial_energy = 0.0; // <H>_init
};

struct GibbsPrediction {
    std::vector<double> times;
    std::vector<double> total_x;
    std::optional<double> t_zc;
    double steady_value = 0.0;  // asymptotic-delta-theta closed form
    TimeSeriesRecord as_record() const;
};

/// Local-Gibbs total polarization curve
///   I_x(t) = <H>_init sum_n phi_n / den_n p_E(n, t)
/// with the zero crossing extracted by the shared detector.
GibbsPrediction predicted_total_polarization(const std::vector<double>& t_grid,
                                             const PotentialProfile& profile,
                                             const GibbsCurveParams& params);

/// Site-resolved version of the same ansatz.
double local_polarization(int n, double t, const PotentialProfile& profile,
                          const GibbsCurveParams& params);

enum class SteadyRegime { constant_phi, asymptotic_delta_theta, dissipative };

struct SteadyParams {
    double coupling_j0 = 0.0;
    double phi = 0.0;          // constant-phi regime
    int n_polarized = 0;       // N_p
    double p = 0.0;            // per-spin polarization
    double delta_theta = 0.0;  // asymptotic regime (profile offset)
    double scale = 0.0;        // profile energy unit J (defaults to |J0|)
    double initial_energy = 0.0;
    double energy_now = 0.0;   // dissipative regime: <H>(t) from a record
};

double steady_polarization(SteadyRegime regime, const SteadyParams& params);

/// Prethermal profile predictions from the conserved quantities.
struct EthPrediction {
    double beta = 0.0;  // PI regime Lagrange multiplier
    double mu = 0.0;    // polarization multiplier (non-PI regime)
    std::vector<Eigen::Vector3d> site_polarization;
};

/// PI regime: beta = -<psi0|H|psi0> / (tr(H^2)/Z), I^x_n = -beta phi_n / 2.
EthPrediction eth_profile_pi(const EffectiveHamiltonian& hamiltonian, const QuantumState& initial);

/// theta != pi regime: spins align with the local kick axes,
/// I_n = n_n tanh(mu/2)/2 with mu fixed by the conserved sum_k n_k . <I_k>.
EthPrediction eth_profile_nopi(const EffectiveHamiltonian& hamiltonian, const QuantumState& initial);

/// Normalized trace tr(H^2)/2^N from the pair tensors and site fields.
double normalized_h_squared(const EffectiveHamiltonian& hamiltonian);

}  // namespace spintex
