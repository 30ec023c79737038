#include "spintex/thermal.hpp"

#include <cmath>
#include <stdexcept>

#include "spintex/readout.hpp"

namespace spintex {

double gaussian_energy_kernel(double n, double t, double diffusion, double n_nv) {
    if (diffusion <= 0.0) throw std::invalid_argument("gaussian_energy_kernel: D must be > 0");
    if (t < 0.0) throw std::invalid_argument("gaussian_energy_kernel: t must be >= 0");
    if (t == 0.0) return n == n_nv ? 1.0 : 0.0;  // delta-at-defect convention
    const double var = diffusion * t;
    const double d = n - n_nv;
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * M_PI * var);
}

namespace {

double gibbs_denominator(const PotentialProfile& profile, int n, double coupling_j) {
    const double phi_n = profile.phi[n];
    const double phi_next = n + 1 < profile.size() ? profile.phi[n + 1] : phi_n;
    return 1.5 * coupling_j * coupling_j + 0.5 * (phi_n * phi_n + phi_next * phi_next);
}

}  // namespace

double local_beta(int n, double t, const PotentialProfile& profile, double coupling_j,
                  double initial_energy, double diffusion) {
    const double p_e = gaussian_energy_kernel(n, t, diffusion, profile.n_nv);
    return -4.0 * initial_energy * p_e / gibbs_denominator(profile, n, coupling_j);
}

double chain_initial_energy(const PotentialProfile& profile, const std::vector<double>& p,
                            double coupling_j0, bool include_p2) {
    if (static_cast<int>(p.size()) != profile.size())
        throw std::invalid_argument("chain_initial_energy: profile size mismatch");
    double e = 0.0;
    for (int n = 0; n < profile.size(); ++n) e += 0.5 * p[n] * profile.phi[n];
    if (include_p2)
        for (int n = 0; n + 1 < profile.size(); ++n)
            e -= 0.25 * coupling_j0 * p[n] * p[n + 1];
    return e;
}

double local_polarization(int n, double t, const PotentialProfile& profile,
                          const GibbsCurveParams& params) {
    const double p_e = gaussian_energy_kernel(n, t, params.diffusion, profile.n_nv);
    return params.initial_energy * profile.phi[n] * p_e /
           gibbs_denominator(profile, n, params.coupling_j0);
}

GibbsPrediction predicted_total_polarization(const std::vector<double>& t_grid,
                                             const PotentialProfile& profile,
                                             const GibbsCurveParams& params) {
    GibbsPrediction out;
    out.times = t_grid;
    out.total_x.reserve(t_grid.size());
    for (double t : t_grid) {
        double sum = 0.0;
        for (int n = 0; n < profile.size(); ++n) sum += local_polarization(n, t, profile, params);
        out.total_x.push_back(sum);
    }
    SteadyParams sp;
    sp.coupling_j0 = params.coupling_j0;
    sp.delta_theta = profile.delta_theta;
    sp.scale = profile.scale;
    sp.initial_energy = params.initial_energy;
    out.steady_value = steady_polarization(SteadyRegime::asymptotic_delta_theta, sp);
    if (t_grid.size() >= 2) {
        ZeroCrossings zc = zero_crossing(out.times, out.total_x);
        out.t_zc = zc.first;
    }
    return out;
}

TimeSeriesRecord GibbsPrediction::as_record() const {
    TimeSeriesRecord rec;
    rec.times = times;
    auto& c = rec.add_channel("sum_Ix");
    c.values = total_x;
    if (t_zc) rec.summary["t_zc"] = *t_zc;
    rec.summary["steady_value"] = steady_value;
    return rec;
}

double steady_polarization(SteadyRegime regime, const SteadyParams& params) {
    switch (regime) {
        case SteadyRegime::constant_phi: {
            const double phi = params.phi, j0 = params.coupling_j0;
            return phi / (1.5 * j0 * j0 + phi * phi) *
                   (params.n_polarized * params.p * phi -
                    0.5 * j0 * params.p * params.p * (params.n_polarized - 1));
        }
        case SteadyRegime::asymptotic_delta_theta: {
            const double j = params.scale != 0.0 ? std::abs(params.scale) : std::abs(params.coupling_j0);
            if (j == 0.0) throw std::invalid_argument("steady_polarization: zero energy scale");
            const double dth = params.delta_theta;
            return -dth / (1.5 * j + j * dth * dth) * params.initial_energy;
        }
        case SteadyRegime::dissipative: {
            const double j = params.scale != 0.0 ? std::abs(params.scale) : std::abs(params.coupling_j0);
            if (j == 0.0) throw std::invalid_argument("steady_polarization: zero energy scale");
            const double dth = params.delta_theta;
            // asymptotic form weighted with the energy left in the system
            return -j * dth / (1.5 * j * j + j * j * dth * dth) * params.energy_now;
        }
    }
    throw std::logic_error("steady_polarization: unknown regime");
}

double normalized_h_squared(const EffectiveHamiltonian& h) {
    // Pauli-string orthogonality: tr(I^a I^b)/2 = delta_ab/4 per site.
    double sum = 0.0;
    for (const auto& p : h.pairs) sum += p.m.squaredNorm() / 16.0;
    for (const auto& f : h.site_fields) sum += f.squaredNorm() / 4.0;
    return sum;
}

EthPrediction eth_profile_pi(const EffectiveHamiltonian& hamiltonian, const QuantumState& initial) {
    const double h2 = normalized_h_squared(hamiltonian);
    if (h2 <= 0.0) throw std::invalid_argument("eth_profile_pi: tr(H^2) = 0");
    BlockHamiltonian h = BlockHamiltonian::from(hamiltonian);
    const double e0 = initial.energy(h);
    EthPrediction out;
    out.beta = -e0 / h2;
    out.site_polarization.resize(hamiltonian.n_spins, Eigen::Vector3d::Zero());
    for (int k = 0; k < hamiltonian.n_spins; ++k)
        out.site_polarization[k] = -0.5 * out.beta * hamiltonian.site_fields[k];
    return out;
}

EthPrediction eth_profile_nopi(const EffectiveHamiltonian& hamiltonian,
                               const QuantumState& initial) {
    if (hamiltonian.axes.empty())
        throw std::invalid_argument("eth_profile_nopi: Hamiltonian carries no kick axes");
    const int n = hamiltonian.n_spins;
    double charge = 0.0;
    for (int k = 0; k < n; ++k) charge += hamiltonian.axes[k].dot(initial.site_spin(k));
    // <sum n_k . I_k> = (N/2) tanh(mu/2) in the aligned thermal state
    double x = 2.0 * charge / n;
    x = std::clamp(x, -1.0 + 1e-15, 1.0 - 1e-15);
    EthPrediction out;
    out.mu = 2.0 * std::atanh(x);
    out.site_polarization.resize(n);
    for (int k = 0; k < n; ++k)
        out.site_polarization[k] = 0.5 * std::tanh(out.mu / 2.0) * hamiltonian.axes[k];
    return out;
}

}  // namespace spintex
