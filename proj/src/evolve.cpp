#include "spintex/evolve.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "engine_detail.hpp"
#include "spintex/trotter.hpp"

namespace spintex {

namespace {

using detail::Recorder;

void embed_site_dense(MatrixXcd& m, const Matrix2cd& u, int k, int n_spins) {
    const std::size_t dim = std::size_t{1} << n_spins;
    const std::size_t bk = std::size_t{1} << k;
    for (std::size_t z = 0; z < dim; ++z) {
        if (z & bk) continue;
        const std::size_t idx[2] = {z, z | bk};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) m(idx[r], idx[c]) += u(r, c);
    }
}

void embed_pair_dense(MatrixXcd& m, const Matrix4cd& u, int i, int j, int n_spins) {
    const std::size_t dim = std::size_t{1} << n_spins;
    const std::size_t bi = std::size_t{1} << i;
    const std::size_t bj = std::size_t{1} << j;
    for (std::size_t z = 0; z < dim; ++z) {
        if ((z & bi) || (z & bj)) continue;
        const std::size_t idx[4] = {z, z | bi, z | bj, z | bi | bj};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) m(idx[r], idx[c]) += u(r, c);
    }
}

/// Dense observable matrices matching the channel list of Recorder.
struct ChannelOps {
    std::vector<std::string> ids;
    std::vector<int> indices;
    std::vector<MatrixXcd> ops;

    ChannelOps(const ObservableRequest& req, const BlockHamiltonian& h, bool chain) {
        const std::size_t dim = h.dim();
        auto add = [&](const std::string& id, int index, MatrixXcd op) {
            ids.push_back(id);
            indices.push_back(index);
            ops.push_back(std::move(op));
        };
        if (req.total_x) {
            MatrixXcd op = MatrixXcd::Zero(dim, dim);
            for (int k = 0; k < h.n_spins; ++k)
                embed_site_dense(op, 0.5 * pauli::x(), k, h.n_spins);
            add("sum_Ix", -1, std::move(op));
        }
        if (req.site_x)
            for (int k = 0; k < h.n_spins; ++k) {
                MatrixXcd op = MatrixXcd::Zero(dim, dim);
                embed_site_dense(op, 0.5 * pauli::x(), k, h.n_spins);
                add("site_Ix", k, std::move(op));
                if (req.site_yz) {
                    MatrixXcd opy = MatrixXcd::Zero(dim, dim);
                    embed_site_dense(opy, 0.5 * pauli::y(), k, h.n_spins);
                    add("site_Iy", k, std::move(opy));
                    MatrixXcd opz = MatrixXcd::Zero(dim, dim);
                    embed_site_dense(opz, 0.5 * pauli::z(), k, h.n_spins);
                    add("site_Iz", k, std::move(opz));
                }
            }
        if (req.energy) add("energy", -1, h.dense());
        if (req.bond_energy && chain) {
            auto bonds = chain_bond_blocks(h);
            for (std::size_t k = 0; k < bonds.size(); ++k) {
                MatrixXcd op = MatrixXcd::Zero(dim, dim);
                embed_pair_dense(op, bonds[k], static_cast<int>(k), static_cast<int>(k) + 1, h.n_spins);
                add("bond_h", static_cast<int>(k), std::move(op));
            }
        }
    }
};

/// Spectral sampler: state evolves by per-mode phases angle_rate[i] * x where
/// x is time (effective evolution) or the cycle index (kicked evolution).
struct SpectralPropagator {
    MatrixXcd basis;            // columns: eigenmodes
    Eigen::VectorXd angle_rate; // rad per unit of x

    VectorXcd phases(double x) const {
        VectorXcd p(angle_rate.size());
        for (Eigen::Index i = 0; i < angle_rate.size(); ++i)
            p[i] = std::exp(Complex(0.0, -angle_rate[i] * x));
        return p;
    }

    /// Record all channels of a density matrix over the grid.
    TimeSeriesRecord run_density(const MatrixXcd& rho0, const std::vector<double>& grid,
                                 const ChannelOps& chans, MatrixXcd& rho_final) const {
        TimeSeriesRecord rec;
        rec.times = grid;
        const MatrixXcd rho_tilde = basis.adjoint() * rho0 * basis;
        for (std::size_t c = 0; c < chans.ops.size(); ++c) {
            auto& channel = rec.add_channel(chans.ids[c], chans.indices[c]);
            channel.values.reserve(grid.size());
            const MatrixXcd o_tilde = basis.adjoint() * (chans.ops[c] * basis);
            // C_ij = O~_ij rho~_ji; value(x) = sum_ij conj(phi_i) C_ij phi_j
            const MatrixXcd cmat = o_tilde.cwiseProduct(rho_tilde.transpose());
            for (double x : grid) {
                const VectorXcd p = phases(x);
                channel.values.push_back((p.adjoint() * (cmat * p)).value().real());
            }
        }
        const VectorXcd pT = phases(grid.empty() ? 0.0 : grid.back());
        const MatrixXcd rt = pT.asDiagonal() * rho_tilde * pT.conjugate().asDiagonal();
        rho_final = basis * rt * basis.adjoint();
        return rec;
    }
};

EvolveResult evolve_spectral(const QuantumState& state, const BlockHamiltonian& h, bool chain,
                             const SpectralPropagator& prop, const std::vector<double>& grid,
                             const ObservableRequest& request) {
    EvolveResult result;
    result.final_state.n_spins = state.n_spins;
    result.final_state.rep = state.rep;

    if (state.rep == Representation::density_matrix) {
        ChannelOps chans(request, h, chain);
        result.record = prop.run_density(state.rho, grid, chans, result.final_state.rho);
        return result;
    }

    Recorder rec(request, h, chain);
    std::vector<VectorXcd> tilde(state.kets.size());
    for (std::size_t m = 0; m < state.kets.size(); ++m)
        tilde[m] = prop.basis.adjoint() * state.kets[m];
    result.final_state.weights = state.weights;
    result.final_state.kets.resize(state.kets.size());
    for (double x : grid) {
        rec.begin_sample(x);
        const VectorXcd p = prop.phases(x);
        for (std::size_t m = 0; m < state.kets.size(); ++m) {
            VectorXcd psi = prop.basis * (p.cwiseProduct(tilde[m]));
            rec.accumulate(psi, state.weights[m]);
            if (x == grid.back()) result.final_state.kets[m] = std::move(psi);
        }
    }
    result.record = std::move(rec.record);
    return result;
}

/// Chebyshev expansion of exp(-i 2pi H dt) psi, exact to Bessel-tail
/// truncation; works matrix-free for any Hamiltonian geometry.
class ChebyshevPropagator {
public:
    explicit ChebyshevPropagator(const BlockHamiltonian& h) : h_(h), bound_(h.norm_bound()) {
        if (bound_ <= 0.0) bound_ = 1.0;
    }

    void advance(VectorXcd& psi, double dt) const {
        // split long intervals so the Bessel order stays moderate
        const double tau_max = 256.0;
        double remaining = dt;
        while (remaining > 0.0) {
            const double tau_full = 2.0 * M_PI * bound_ * remaining;
            const double step = tau_full > tau_max ? remaining * tau_max / tau_full : remaining;
            segment(psi, step);
            remaining -= step;
        }
    }

private:
    void segment(VectorXcd& psi, double dt) const {
        const double tau = 2.0 * M_PI * bound_ * dt;  // spectrum scaled to [-1, 1]
        const int k_max = static_cast<int>(std::ceil(tau + 20.0 + 10.0 * std::cbrt(tau + 1.0)));
        VectorXcd t_prev = psi;          // T_0 psi
        VectorXcd t_cur(psi.size());
        apply_scaled(t_prev, t_cur);     // T_1 psi = H~ psi
        VectorXcd out = std::cyl_bessel_j(0, tau) * t_prev;
        Complex ik(0, -1);               // (-i)^k
        out += 2.0 * ik * std::cyl_bessel_j(1, tau) * t_cur;
        VectorXcd t_next(psi.size());
        for (int k = 2; k <= k_max; ++k) {
            apply_scaled(t_cur, t_next);
            t_next = 2.0 * t_next - t_prev;
            t_prev.swap(t_cur);
            t_cur.swap(t_next);
            ik *= Complex(0, -1);
            const double bessel = std::cyl_bessel_j(k, tau);
            out += 2.0 * ik * bessel * t_cur;
            if (k > tau && std::abs(bessel) < 1e-16) break;
        }
        psi = std::move(out);
    }

    void apply_scaled(const VectorXcd& x, VectorXcd& y) const {
        h_.apply(x, y);
        y /= bound_;
    }

    const BlockHamiltonian& h_;
    double bound_;
};

/// Closed pure-state bundles advance trajectory-by-trajectory via Chebyshev.
EvolveResult evolve_bundle_chebyshev(const QuantumState& state, const BlockHamiltonian& h,
                                     bool chain, const std::vector<double>& grid,
                                     const ObservableRequest& request) {
    Recorder rec(request, h, chain);
    ChebyshevPropagator prop(h);
    const std::size_t n_t = grid.size();
    rec.record.times = std::vector<double>(grid.begin(), grid.end());
    for (auto& c : rec.record.channels) c.values.assign(n_t, 0.0);

    EvolveResult result;
    result.final_state.n_spins = state.n_spins;
    result.final_state.rep = Representation::trajectory_bundle;
    result.final_state.weights = state.weights;
    result.final_state.kets.resize(state.kets.size());

    for (std::size_t m = 0; m < state.kets.size(); ++m) {
        VectorXcd psi = state.kets[m];
        double t = 0.0;
        for (std::size_t i = 0; i < n_t; ++i) {
            if (grid[i] > t) {
                prop.advance(psi, grid[i] - t);
                t = grid[i];
            }
            const double keep_norm = psi.norm();
            if (std::abs(keep_norm - 1.0) > 1e-8) psi /= keep_norm;  // Bessel-tail roundoff
            // accumulate into slot i
            rec.record.times[i] = grid[i];
            double sum_x = 0.0;
            std::vector<Eigen::Vector3d> spins(h.n_spins);
            for (int k = 0; k < h.n_spins; ++k) {
                spins[k] = site_spin(psi, k, h.n_spins);
                sum_x += spins[k].x();
            }
            const double w = state.weights[m];
            if (request.total_x) rec.record.find("sum_Ix")->values[i] += w * sum_x;
            if (request.site_x)
                for (int k = 0; k < h.n_spins; ++k) {
                    rec.record.find("site_Ix", k)->values[i] += w * spins[k].x();
                    if (request.site_yz) {
                        rec.record.find("site_Iy", k)->values[i] += w * spins[k].y();
                        rec.record.find("site_Iz", k)->values[i] += w * spins[k].z();
                    }
                }
            if (request.energy) rec.record.find("energy")->values[i] += w * expectation(psi, h);
            for (std::size_t b = 0; b < rec.bonds.size(); ++b) {
                Matrix4cd rdm =
                    two_site_rdm(psi, static_cast<int>(b), static_cast<int>(b) + 1, h.n_spins);
                rec.record.find("bond_h", static_cast<int>(b))->values[i] +=
                    w * (rec.bonds[b] * rdm).trace().real();
            }
        }
        result.final_state.kets[m] = std::move(psi);
    }
    result.record = std::move(rec.record);
    return result;
}

}  // namespace

EvolveResult evolve_effective(const QuantumState& state, const EffectiveHamiltonian& hamiltonian,
                              const std::vector<double>& t_grid, const ObservableRequest& request) {
    if (hamiltonian.n_spins != state.n_spins)
        throw std::invalid_argument("evolve_effective: spin-count mismatch");
    BlockHamiltonian h = BlockHamiltonian::from(hamiltonian);
    const bool chain = hamiltonian.is_chain();

    if (state.rep == Representation::trajectory_bundle)
        return evolve_bundle_chebyshev(state, h, chain, t_grid, request);

    const MatrixXcd dense = h.dense();
    if ((dense - dense.adjoint()).norm() > 1e-9 * std::max(1.0, dense.norm()))
        throw std::invalid_argument("evolve_effective: non-Hermitian Hamiltonian");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(dense);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("evolve_effective: eigendecomposition failed");

    SpectralPropagator prop;
    prop.basis = es.eigenvectors();
    prop.angle_rate = 2.0 * M_PI * es.eigenvalues();  // rad/s per Hz energy
    return evolve_spectral(state, h, chain, prop, t_grid, request);
}

std::vector<int> sample_cycle_indices(int n_cycles, int n_samples, bool log_spacing) {
    if (n_cycles < 1 || n_samples < 1)
        throw std::invalid_argument("sample_cycle_indices: bad arguments");
    std::vector<int> out;
    out.reserve(n_samples);
    if (n_samples >= n_cycles) {
        for (int n = 1; n <= n_cycles; ++n) out.push_back(n);
        return out;
    }
    if (log_spacing) {
        double x = 1.0;
        const double f = std::pow(static_cast<double>(n_cycles), 1.0 / (n_samples - 1));
        for (int i = 0; i < n_samples; ++i) {
            int n = std::min(n_cycles, static_cast<int>(std::lround(x)));
            if (out.empty() || n > out.back()) out.push_back(n);
            x *= f;
        }
        if (out.back() != n_cycles) out.push_back(n_cycles);
    } else {
        for (int i = 1; i <= n_samples; ++i)
            out.push_back(static_cast<int>(std::lround(static_cast<double>(i) * n_cycles / n_samples)));
    }
    return out;
}

EvolveResult evolve_kicked(const QuantumState& state, const SpinLattice& lattice,
                           const PulseSequence& sequence, const std::vector<int>& sample_cycles,
                           const ObservableRequest& request) {
    sequence.validate();
    const int n = lattice.n_spins();
    if (n != state.n_spins) throw std::invalid_argument("evolve_kicked: spin-count mismatch");
    if (n > 12) throw std::invalid_argument("evolve_kicked: dense Floquet evolution limited to 12 spins");

    // H_kick = Omega sum I^x + sum eta_j I^z; H_full = H_dd + sum eta_j I^z.
    EffectiveHamiltonian kick_h;
    kick_h.kind = HamiltonianKind::SL;  // tag unused here
    kick_h.n_spins = n;
    kick_h.site_fields.resize(n);
    for (int k = 0; k < n; ++k)
        kick_h.site_fields[k] = Eigen::Vector3d(sequence.rabi, 0.0, lattice.eta[k]);

    EffectiveHamiltonian full_h;
    full_h.kind = HamiltonianKind::TOY_PI;
    full_h.n_spins = n;
    full_h.site_fields.resize(n);
    for (int k = 0; k < n; ++k) full_h.site_fields[k] = Eigen::Vector3d(0.0, 0.0, lattice.eta[k]);
    for (const auto& c : lattice.couplings) {
        Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
        m.diagonal() << -c.b_hz, -c.b_hz, 2.0 * c.b_hz;  // b (3 z z^T - 1)
        full_h.pairs.push_back({c.i, c.j, m});
    }

    BlockHamiltonian hk = BlockHamiltonian::from(kick_h);
    BlockHamiltonian hf = BlockHamiltonian::from(full_h);

    auto propagator = [](const BlockHamiltonian& h, double t) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h.dense());
        VectorXcd ph(es.eigenvalues().size());
        for (Eigen::Index i = 0; i < ph.size(); ++i)
            ph[i] = std::exp(Complex(0.0, -2.0 * M_PI * es.eigenvalues()[i] * t));
        return MatrixXcd(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
    };
    const MatrixXcd u_cycle = propagator(hf, sequence.t_dd) * propagator(hk, sequence.t_kick);

    Eigen::ComplexSchur<MatrixXcd> schur(u_cycle);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("evolve_kicked: Schur decomposition failed");
    const MatrixXcd& t_mat = schur.matrixT();
    double offdiag = 0.0;
    for (Eigen::Index c = 0; c < t_mat.cols(); ++c)
        for (Eigen::Index r = 0; r < c; ++r) offdiag = std::max(offdiag, std::abs(t_mat(r, c)));
    if (offdiag > 1e-8)
        throw std::runtime_error("evolve_kicked: cycle operator not numerically normal");

    SpectralPropagator prop;
    prop.basis = schur.matrixU();
    prop.angle_rate.resize(t_mat.rows());
    for (Eigen::Index i = 0; i < t_mat.rows(); ++i)
        prop.angle_rate[i] = -std::arg(t_mat(i, i));  // phases advance as lambda^n

    std::vector<double> grid(sample_cycles.begin(), sample_cycles.end());
    BlockHamiltonian h_obs = hf;  // chain tag only affects bond channels
    EvolveResult result =
        evolve_spectral(state, h_obs, full_h.is_chain(), prop, grid, request);
    for (auto& t : result.record.times) t *= sequence.period();
    return result;
}

}  // namespace spintex
