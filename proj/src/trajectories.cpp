#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "engine_detail.hpp"
#include "spintex/rng.hpp"

namespace spintex::detail {

namespace {

/// Jump operators in sigma form; with equal rates the no-jump generator is
/// proportional to the identity, so waiting times are exact exponentials and
/// the deterministic evolution between jumps is purely Hamiltonian.
struct JumpSet {
    Matrix2cd lp, lm, lz;
    JumpSet() {
        lp = 0.5 * (pauli::x() + Complex(0, 1) * pauli::y());
        lm = 0.5 * (pauli::x() - Complex(0, 1) * pauli::y());
        lz = pauli::z();
    }
};

}  // namespace

EvolveResult evolve_lindblad_trajectories(const QuantumState& state,
                                          const EffectiveHamiltonian& hamiltonian,
                                          const DissipationSpec& dissipation,
                                          const std::vector<double>& t_grid,
                                          const ObservableRequest& request,
                                          const LindbladOptions& opts) {
    if (!dissipation.equal_rates())
        throw std::invalid_argument(
            "evolve_lindblad: trajectory unraveling requires gamma_+ = gamma_- = gamma_z "
            "(use the density-matrix representation for unequal rates)");
    if (state.n_spins > 12)
        throw std::invalid_argument("evolve_lindblad: trajectory mode limited to 12 spins here");

    BlockHamiltonian h = BlockHamiltonian::from(hamiltonian);
    const MatrixXcd dense = h.dense();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(dense);
    const MatrixXcd& v = es.eigenvectors();
    const Eigen::VectorXd& energy = es.eigenvalues();

    const double gamma = dissipation.gamma_z;  // equal rates
    std::vector<double> scales = dissipation.scales(h.n_spins);
    std::vector<int> active;
    std::vector<double> site_rate;  // total jump rate per site, state-independent
    double rate_total = 0.0;
    for (int k = 0; k < h.n_spins; ++k)
        if (scales[k] > 0.0) {
            active.push_back(k);
            const double r = 2.0 * M_PI * gamma * scales[k] * 2.0;  // sum_j <L_j^dag L_j> = 2
            site_rate.push_back(r);
            rate_total += r;
        }

    const JumpSet jumps;
    Recorder rec(request, h, hamiltonian.is_chain());
    rec.record.add_channel("sum_Ix_se");

    const std::size_t n_traj = state.kets.size();
    const std::size_t n_t = t_grid.size();
    for (double t : t_grid) rec.record.times.push_back(t);
    for (auto& c : rec.record.channels) c.values.assign(n_t, 0.0);
    std::vector<double> sum_x_sq(n_t, 0.0);
    std::vector<VectorXcd> final_kets(n_traj);

    for (std::size_t m = 0; m < n_traj; ++m) {
        Rng rng = Rng::derive(opts.seed ^ 0x72616a65637473ull, m);
        VectorXcd tilde = v.adjoint() * state.kets[m];
        double t_now = 0.0;
        double t_jump = rate_total > 0.0 ? -std::log(1.0 - rng.uniform()) / rate_total
                                         : std::numeric_limits<double>::infinity();

        auto evolve_to = [&](VectorXcd& psi_tilde, double from, double to) {
            if (to <= from) return;
            for (Eigen::Index i = 0; i < psi_tilde.size(); ++i)
                psi_tilde[i] *= std::exp(Complex(0.0, -2.0 * M_PI * energy[i] * (to - from)));
        };

        std::size_t next = 0;
        while (next < n_t) {
            const double t_target = t_grid[next];
            if (t_jump < t_target) {
                evolve_to(tilde, t_now, t_jump);
                t_now = t_jump;
                VectorXcd psi = v * tilde;
                // pick the site uniformly by rate, then the operator by its
                // conditional weight on the current state
                double u = rng.uniform() * rate_total;
                std::size_t a = 0;
                while (a + 1 < active.size() && u > site_rate[a]) u -= site_rate[a], ++a;
                const int site = active[a];
                Matrix2cd rdm = one_site_rdm(psi, site, h.n_spins);
                const double wp = std::real((jumps.lp.adjoint() * jumps.lp * rdm).trace());
                const double wm = std::real((jumps.lm.adjoint() * jumps.lm * rdm).trace());
                const double wz = std::real((jumps.lz.adjoint() * jumps.lz * rdm).trace());
                double pick = rng.uniform() * (wp + wm + wz);
                const Matrix2cd& l = pick < wp ? jumps.lp : (pick < wp + wm ? jumps.lm : jumps.lz);
                apply_site_op(psi, l, site);
                const double nrm = psi.norm();
                if (nrm > 1e-14) {
                    psi /= nrm;
                    tilde = v.adjoint() * psi;
                }  // zero-weight jump: state unchanged
                t_jump = t_now + (rate_total > 0.0 ? -std::log(1.0 - rng.uniform()) / rate_total
                                                   : std::numeric_limits<double>::infinity());
                continue;
            }
            evolve_to(tilde, t_now, t_target);
            t_now = t_target;
            VectorXcd psi = v * tilde;
            // accumulate channels at slot `next`
            const double w = state.weights[m];
            double sum_x = 0.0;
            std::vector<Eigen::Vector3d> spins(h.n_spins);
            for (int k = 0; k < h.n_spins; ++k) {
                spins[k] = site_spin(psi, k, h.n_spins);
                sum_x += spins[k].x();
            }
            if (request.total_x) rec.record.find("sum_Ix")->values[next] += w * sum_x;
            sum_x_sq[next] += w * sum_x * sum_x;
            if (request.site_x)
                for (int k = 0; k < h.n_spins; ++k) {
                    rec.record.find("site_Ix", k)->values[next] += w * spins[k].x();
                    if (request.site_yz) {
                        rec.record.find("site_Iy", k)->values[next] += w * spins[k].y();
                        rec.record.find("site_Iz", k)->values[next] += w * spins[k].z();
                    }
                }
            if (request.energy) rec.record.find("energy")->values[next] += w * expectation(psi, h);
            for (std::size_t b = 0; b < rec.bonds.size(); ++b) {
                Matrix4cd rdm2 = two_site_rdm(psi, static_cast<int>(b), static_cast<int>(b) + 1, h.n_spins);
                rec.record.find("bond_h", static_cast<int>(b))->values[next] +=
                    w * (rec.bonds[b] * rdm2).trace().real();
            }
            if (next + 1 == n_t) final_kets[m] = std::move(psi);
            ++next;
        }
    }

    // standard error of the sum_Ix estimator across trajectories
    if (request.total_x) {
        auto* se_channel = rec.record.find("sum_Ix_se");
        const auto& mean = rec.record.get("sum_Ix");
        for (std::size_t i = 0; i < n_t; ++i) {
            // weights are uniform 1/M: E[x^2]/M-ish spread of the mean
            const double var = std::max(0.0, sum_x_sq[i] - mean[i] * mean[i]);
            se_channel->values[i] = std::sqrt(var / std::max<std::size_t>(1, n_traj - 1));
        }
    }

    EvolveResult result;
    result.record = std::move(rec.record);
    result.final_state.n_spins = state.n_spins;
    result.final_state.rep = Representation::trajectory_bundle;
    result.final_state.weights = state.weights;
    result.final_state.kets = std::move(final_kets);
    return result;
}

}  // namespace spintex::detail
