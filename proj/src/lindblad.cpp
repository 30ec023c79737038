#include "spintex/lindblad.hpp"

#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "engine_detail.hpp"
#include "spintex/trotter.hpp"

namespace spintex {

std::vector<double> DissipationSpec::scales(int n_spins) const {
    if (site_scale.empty()) {
        std::vector<double> s(n_spins, 0.0);
        if (site < 0 || site >= n_spins)
            throw std::invalid_argument("DissipationSpec: site out of range");
        s[site] = 1.0;
        return s;
    }
    if (static_cast<int>(site_scale.size()) != n_spins)
        throw std::invalid_argument("DissipationSpec: site_scale size mismatch");
    return site_scale;
}

DissipationSpec DissipationSpec::single_site(int site, double g_plus, double g_minus, double g_z) {
    if (g_plus < 0.0 || g_minus < 0.0 || g_z < 0.0)
        throw std::invalid_argument("DissipationSpec: rates must be >= 0");
    DissipationSpec d;
    d.site = site;
    d.gamma_plus = g_plus;
    d.gamma_minus = g_minus;
    d.gamma_z = g_z;
    return d;
}

DissipationSpec DissipationSpec::r6_profile(const SpinLattice& lattice, int reference_site,
                                            double g_plus, double g_minus, double g_z) {
    DissipationSpec d = single_site(reference_site, g_plus, g_minus, g_z);
    const double r0 = lattice.radius(reference_site);
    d.site_scale.resize(lattice.n_spins());
    for (int k = 0; k < lattice.n_spins(); ++k) {
        const double r = lattice.radius(k);
        d.site_scale[k] = std::pow(r0 / r, 6.0);
    }
    return d;
}

Eigen::Matrix4cd single_site_channel(double g_plus_hz, double g_minus_hz, double g_z_hz, double dt) {
    const Matrix2cd lp = 0.5 * (pauli::x() + Complex(0, 1) * pauli::y());
    const Matrix2cd lm = 0.5 * (pauli::x() - Complex(0, 1) * pauli::y());
    const Matrix2cd lz = pauli::z();
    const Matrix2cd ops[3] = {lp, lm, lz};
    const double rates[3] = {2.0 * M_PI * g_plus_hz, 2.0 * M_PI * g_minus_hz, 2.0 * M_PI * g_z_hz};

    Eigen::Matrix4cd gen = Eigen::Matrix4cd::Zero();
    for (int j = 0; j < 3; ++j) {
        const Matrix2cd& l = ops[j];
        const Matrix2cd ldl = l.adjoint() * l;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) {
                        Complex v = l(a, c) * std::conj(l(b, d));
                        if (b == d) v -= 0.5 * ldl(a, c);
                        if (a == c) v -= 0.5 * std::conj(ldl(b, d));
                        gen(a + 2 * b, c + 2 * d) += rates[j] * v;
                    }
    }
    return (gen * dt).exp();
}

namespace {

void apply_channel(MatrixXcd& rho, const Eigen::Matrix4cd& s, int k) {
    const std::size_t dim = rho.rows();
    const std::size_t bk = std::size_t{1} << k;
    const std::size_t group = 2 * bk;
    for (std::size_t cbase = 0; cbase < dim; cbase += group)
        for (std::size_t clo = 0; clo < bk; ++clo) {
            Complex* col0 = rho.col(cbase + clo).data();
            Complex* col1 = rho.col(cbase + clo + bk).data();
            for (std::size_t rbase = 0; rbase < dim; rbase += group)
                for (std::size_t rlo = 0; rlo < bk; ++rlo) {
                    const std::size_t r = rbase + rlo, r1 = r + bk;
                    // v index a + 2b: a row bit, b column bit
                    const Complex v0 = col0[r], v1 = col0[r1], v2 = col1[r], v3 = col1[r1];
                    col0[r]  = s(0, 0) * v0 + s(0, 1) * v1 + s(0, 2) * v2 + s(0, 3) * v3;
                    col0[r1] = s(1, 0) * v0 + s(1, 1) * v1 + s(1, 2) * v2 + s(1, 3) * v3;
                    col1[r]  = s(2, 0) * v0 + s(2, 1) * v1 + s(2, 2) * v2 + s(2, 3) * v3;
                    col1[r1] = s(3, 0) * v0 + s(3, 1) * v1 + s(3, 2) * v2 + s(3, 3) * v3;
                }
        }
}

struct ChannelSite {
    int site;
    Eigen::Matrix4cd s;
};

using detail::Recorder;

/// Adaptive RK45 (Dormand-Prince) on the dense master equation; fallback for
/// non-chain geometries. Cost grows quickly, intended for N <= 8.
class MasterEquationRk {
public:
    MasterEquationRk(const BlockHamiltonian& h, const std::vector<ChannelSite>& jumps,
                     const DissipationSpec& d)
        : h_(h), spec_(d) {
        for (const auto& c : jumps) sites_.push_back(c.site);
    }

    void derivative(const MatrixXcd& rho, MatrixXcd& out) const {
        const std::size_t dim = rho.rows();
        out.resize(dim, dim);
        // -i 2pi [H, rho]
        MatrixXcd hrho(dim, dim);
        VectorXcd col(dim);
        for (std::size_t c = 0; c < dim; ++c) {
            h_.apply(rho.col(c), col);
            hrho.col(c) = col;
        }
        out = Complex(0, -2.0 * M_PI) * (hrho - hrho.adjoint());
        // jump terms
        const Matrix2cd lp = 0.5 * (pauli::x() + Complex(0, 1) * pauli::y());
        const Matrix2cd lm = 0.5 * (pauli::x() - Complex(0, 1) * pauli::y());
        const Matrix2cd lz = pauli::z();
        const Matrix2cd ops[3] = {lp, lm, lz};
        const double gam[3] = {spec_.gamma_plus, spec_.gamma_minus, spec_.gamma_z};
        std::vector<double> sc = spec_.scales(h_.n_spins);
        for (int k = 0; k < h_.n_spins; ++k) {
            if (sc[k] == 0.0) continue;
            for (int j = 0; j < 3; ++j) {
                const double w = 2.0 * M_PI * gam[j] * sc[k];
                if (w == 0.0) continue;
                MatrixXcd tmp = rho;
                site_left(tmp, ops[j], k);
                site_right(tmp, ops[j].adjoint(), k);
                out += w * tmp;
                const Matrix2cd ldl = ops[j].adjoint() * ops[j];
                MatrixXcd anti = rho;
                site_left(anti, ldl, k);
                MatrixXcd anti2 = rho;
                site_right(anti2, ldl, k);
                out -= 0.5 * w * (anti + anti2);
            }
        }
    }

    static void site_left(MatrixXcd& m, const Matrix2cd& u, int k) {
        const std::size_t dim = m.rows();
        for (std::size_t c = 0; c < dim; ++c) {
            VectorXcd col = m.col(c);
            apply_site_op(col, u, k);
            m.col(c) = col;
        }
    }
    static void site_right(MatrixXcd& m, const Matrix2cd& u, int k) {
        // m <- m u_k: act with u^T on the column index.
        const std::size_t dim = m.rows();
        const std::size_t bk = std::size_t{1} << k;
        for (std::size_t c = 0; c < dim; ++c) {
            if (c & bk) continue;
            for (std::size_t r = 0; r < dim; ++r) {
                const Complex v0 = m(r, c), v1 = m(r, c | bk);
                m(r, c) = v0 * u(0, 0) + v1 * u(1, 0);
                m(r, c | bk) = v0 * u(0, 1) + v1 * u(1, 1);
            }
        }
    }

    /// Integrate from t0 to t1 with adaptive steps.
    void advance(MatrixXcd& rho, double t0, double t1, double rtol = 1e-8) const {
        double t = t0;
        double dt = (t1 - t0) / 100.0;
        const double dt_min = (t1 - t0) * 1e-12;
        MatrixXcd k1, k2, k3, k4, k5, k6, tmp, err, r5;
        while (t < t1) {
            dt = std::min(dt, t1 - t);
            derivative(rho, k1);
            tmp = rho + dt * 0.25 * k1;
            derivative(tmp, k2);
            tmp = rho + dt * (3.0 / 32 * k1 + 9.0 / 32 * k2);
            derivative(tmp, k3);
            tmp = rho + dt * (1932.0 / 2197 * k1 - 7200.0 / 2197 * k2 + 7296.0 / 2197 * k3);
            derivative(tmp, k4);
            tmp = rho + dt * (439.0 / 216 * k1 - 8.0 * k2 + 3680.0 / 513 * k3 - 845.0 / 4104 * k4);
            derivative(tmp, k5);
            tmp = rho + dt * (-8.0 / 27 * k1 + 2.0 * k2 - 3544.0 / 2565 * k3 + 1859.0 / 4104 * k4 -
                              11.0 / 40 * k5);
            derivative(tmp, k6);
            r5 = rho + dt * (16.0 / 135 * k1 + 6656.0 / 12825 * k3 + 28561.0 / 56430 * k4 -
                             9.0 / 50 * k5 + 2.0 / 55 * k6);
            err = dt * (1.0 / 360 * k1 - 128.0 / 4275 * k3 - 2197.0 / 75240 * k4 + 1.0 / 50 * k5 +
                        2.0 / 55 * k6);
            const double scale = std::max(1.0, rho.norm());
            const double e = err.norm() / scale;
            if (e <= rtol || dt <= dt_min) {
                rho = r5;
                t += dt;
            }
            if (e > 0.0) {
                dt *= std::min(2.0, std::max(0.2, 0.9 * std::pow(rtol / e, 0.2)));
                if (dt < dt_min)
                    throw std::runtime_error(
                        "evolve_lindblad: adaptive step collapsed at t = " + std::to_string(t) +
                        " (residual " + std::to_string(e) + ")");
            } else {
                dt *= 2.0;
            }
        }
    }

private:
    const BlockHamiltonian& h_;
    DissipationSpec spec_;
    std::vector<int> sites_;
};

}  // namespace

EvolveResult evolve_lindblad(const QuantumState& state, const EffectiveHamiltonian& hamiltonian,
                             const DissipationSpec& dissipation, const std::vector<double>& t_grid,
                             const ObservableRequest& request, const LindbladOptions& opts) {
    if (!dissipation.any()) return evolve_effective(state, hamiltonian, t_grid, request);

    if (state.rep == Representation::trajectory_bundle)
        return detail::evolve_lindblad_trajectories(state, hamiltonian, dissipation, t_grid, request, opts);

    BlockHamiltonian h = BlockHamiltonian::from(hamiltonian);
    const bool chain = hamiltonian.is_chain();
    Recorder rec(request, h, chain);
    MatrixXcd rho = state.rho;

    std::vector<double> scales = dissipation.scales(h.n_spins);

    if (chain) {
        double dt = opts.dt;
        if (dt <= 0.0) {
            const double rate = 2.0 * M_PI *
                (dissipation.gamma_plus + dissipation.gamma_minus + dissipation.gamma_z);
            dt = std::min(default_trotter_dt(h), rate > 0.0 ? 0.05 / rate : 1e30);
        }
        ChainGates gates = make_chain_gates(h, dt);
        std::vector<ChannelSite> channels;
        for (int k = 0; k < h.n_spins; ++k)
            if (scales[k] > 0.0)
                channels.push_back({k, single_site_channel(dissipation.gamma_plus * scales[k],
                                                           dissipation.gamma_minus * scales[k],
                                                           dissipation.gamma_z * scales[k], dt)});
        double t = 0.0;
        std::size_t next = 0;
        if (!t_grid.empty() && t_grid[0] <= 0.0) {
            rec.sample(0.0, rho);
            ++next;
        }
        while (next < t_grid.size()) {
            trotter_step(rho, gates);
            // strang arrangement: channel between symmetric gate half-steps is
            // approximated by channel-after-step at the same order in dt
            for (const auto& c : channels) apply_channel(rho, c.s, c.site);
            t += dt;
            while (next < t_grid.size() && t >= t_grid[next] - 0.5 * dt) {
                rec.sample(t, rho);
                ++next;
            }
        }
    } else {
        if (h.n_spins > 8)
            throw std::invalid_argument(
                "evolve_lindblad: dense non-chain integration limited to 8 spins");
        std::vector<ChannelSite> sites;
        for (int k = 0; k < h.n_spins; ++k)
            if (scales[k] > 0.0) sites.push_back({k, {}});
        MasterEquationRk rk(h, sites, dissipation);
        double t = 0.0;
        for (double target : t_grid) {
            if (target > t) {
                rk.advance(rho, t, target);
                t = target;
            }
            rec.sample(t, rho);
        }
    }

    EvolveResult result;
    result.record = std::move(rec.record);
    result.final_state.n_spins = state.n_spins;
    result.final_state.rep = Representation::density_matrix;
    result.final_state.rho = std::move(rho);
    return result;
}

}  // namespace spintex
