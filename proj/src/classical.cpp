#include "spintex/classical.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "spintex/rng.hpp"
#include "spintex/threading.hpp"

namespace spintex {

std::vector<Vector3d> heatbath_sample(const std::vector<double>& mu_profile, std::uint64_t seed,
                                      bool legacy_range) {
    Rng rng(seed);
    std::vector<Vector3d> spins(mu_profile.size());
    for (std::size_t k = 0; k < mu_profile.size(); ++k) {
        const double mu = mu_profile[k];
        if (!std::isfinite(mu)) throw std::invalid_argument("heatbath_sample: mu must be finite");
        const double u = rng.uniform();
        double x;
        if (std::abs(mu) < 1e-9) {
            x = 2.0 * u - 1.0;
        } else {
            x = std::log1p(u * std::expm1(2.0 * mu)) / mu;
            if (!legacy_range) x -= 1.0;
        }
        x = std::clamp(x, -1.0, 1.0);
        const double rho = std::sqrt(std::max(0.0, 1.0 - x * x));
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        spins[k] = Vector3d(x, rho * std::cos(phi), rho * std::sin(phi));
    }
    return spins;
}

std::vector<double> domain_wall_mu(const SpinLattice& lattice, double mu, double r_pol) {
    std::vector<double> out(lattice.n_spins(), 0.0);
    for (int k = 0; k < lattice.n_spins(); ++k)
        if (lattice.radius(k) <= r_pol) out[k] = mu;
    return out;
}

namespace {

/// Flattened pair table for fast torque evaluation.
struct CompiledSystem {
    int n_sites = 0;
    bool diagonal = true;
    std::vector<int> pi, pj;
    std::vector<Eigen::Matrix3d> full;
    std::vector<Vector3d> diag;    // diagonal tensors
    std::vector<Vector3d> fields;  // Hz

    explicit CompiledSystem(const EffectiveHamiltonian& h) {
        n_sites = h.n_spins;
        fields.assign(n_sites, Vector3d::Zero());
        for (int k = 0; k < n_sites && k < static_cast<int>(h.site_fields.size()); ++k)
            fields[k] = h.site_fields[k];
        for (const auto& p : h.pairs) {
            pi.push_back(p.i);
            pj.push_back(p.j);
            full.push_back(p.m);
            diag.push_back(p.m.diagonal());
            if (!p.m.isDiagonal(1e-14)) diagonal = false;
        }
    }

    void gradient(const std::vector<Vector3d>& spins, std::vector<Vector3d>& field) const {
        field = fields;
        if (diagonal) {
            for (std::size_t p = 0; p < pi.size(); ++p) {
                const Vector3d& d = diag[p];
                const Vector3d& si = spins[pi[p]];
                const Vector3d& sj = spins[pj[p]];
                field[pi[p]] += d.cwiseProduct(sj);
                field[pj[p]] += d.cwiseProduct(si);
            }
        } else {
            for (std::size_t p = 0; p < pi.size(); ++p) {
                field[pi[p]] += full[p] * spins[pj[p]];
                field[pj[p]] += full[p].transpose() * spins[pi[p]];
            }
        }
    }

    void torque(const std::vector<Vector3d>& spins, std::vector<Vector3d>& out,
                std::vector<Vector3d>& scratch) const {
        gradient(spins, scratch);
        out.resize(spins.size());
        for (std::size_t k = 0; k < spins.size(); ++k)
            out[k] = 2.0 * M_PI * spins[k].cross(scratch[k]);
    }

    double energy(const std::vector<Vector3d>& spins) const {
        double e = 0.0;
        for (std::size_t p = 0; p < pi.size(); ++p)
            e += spins[pi[p]].dot(full[p] * spins[pj[p]]);
        for (int k = 0; k < n_sites; ++k) e += fields[k].dot(spins[k]);
        return e;
    }
};

using SpinArray = std::vector<Vector3d>;

void axpy(SpinArray& y, double a, const SpinArray& x) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

/// Adaptive RKF45 step; returns accepted dt and updates state/time.
class Rk45 {
public:
    Rk45(const CompiledSystem& sys, const IntegratorOptions& opts) : sys_(sys), opts_(opts) {}

    void advance(SpinArray& s, double& t, double t_target) {
        if (dt_ <= 0.0) {
            dt_ = opts_.dt_initial > 0.0 ? opts_.dt_initial : guess_dt(s);
        }
        while (t < t_target) {
            double dt = std::min(dt_, t_target - t);
            if (opts_.dt_max > 0.0) dt = std::min(dt, opts_.dt_max);
            sys_.torque(s, k1_, scratch_);
            tmp_ = s; axpy(tmp_, dt * 0.25, k1_);
            sys_.torque(tmp_, k2_, scratch_);
            tmp_ = s; axpy(tmp_, dt * 3.0 / 32, k1_); axpy(tmp_, dt * 9.0 / 32, k2_);
            sys_.torque(tmp_, k3_, scratch_);
            tmp_ = s; axpy(tmp_, dt * 1932.0 / 2197, k1_); axpy(tmp_, -dt * 7200.0 / 2197, k2_);
            axpy(tmp_, dt * 7296.0 / 2197, k3_);
            sys_.torque(tmp_, k4_, scratch_);
            tmp_ = s; axpy(tmp_, dt * 439.0 / 216, k1_); axpy(tmp_, -dt * 8.0, k2_);
            axpy(tmp_, dt * 3680.0 / 513, k3_); axpy(tmp_, -dt * 845.0 / 4104, k4_);
            sys_.torque(tmp_, k5_, scratch_);
            tmp_ = s; axpy(tmp_, -dt * 8.0 / 27, k1_); axpy(tmp_, dt * 2.0, k2_);
            axpy(tmp_, -dt * 3544.0 / 2565, k3_); axpy(tmp_, dt * 1859.0 / 4104, k4_);
            axpy(tmp_, -dt * 11.0 / 40, k5_);
            sys_.torque(tmp_, k6_, scratch_);

            double err = 0.0;
            next_ = s;
            for (std::size_t k = 0; k < s.size(); ++k) {
                const Vector3d e = dt * (1.0 / 360 * k1_[k] - 128.0 / 4275 * k3_[k] -
                                         2197.0 / 75240 * k4_[k] + 1.0 / 50 * k5_[k] +
                                         2.0 / 55 * k6_[k]);
                next_[k] += dt * (16.0 / 135 * k1_[k] + 6656.0 / 12825 * k3_[k] +
                                  28561.0 / 56430 * k4_[k] - 9.0 / 50 * k5_[k] + 2.0 / 55 * k6_[k]);
                const double scale = opts_.atol + opts_.rtol * s[k].norm();
                err = std::max(err, e.norm() / scale);
            }
            if (err <= 1.0) {
                s.swap(next_);
                t += dt;
            }
            const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 2.0;
            dt_ = dt * std::clamp(grow, 0.2, 2.0);
            if (dt_ < 1e-15 * std::max(1.0, std::abs(t_target)))
                throw std::runtime_error("classical_evolve: step size collapsed at t = " +
                                         std::to_string(t));
        }
    }

private:
    double guess_dt(const SpinArray& s) {
        sys_.torque(s, k1_, scratch_);
        double wmax = 1e-12;
        for (const auto& v : k1_) wmax = std::max(wmax, v.norm());
        return 0.05 / wmax;
    }

    const CompiledSystem& sys_;
    IntegratorOptions opts_;
    double dt_ = 0.0;
    SpinArray k1_, k2_, k3_, k4_, k5_, k6_, tmp_, next_, scratch_;
};

}  // namespace

void classical_derivative(const std::vector<Vector3d>& spins,
                          const EffectiveHamiltonian& hamiltonian, std::vector<Vector3d>& torque) {
    CompiledSystem sys(hamiltonian);
    std::vector<Vector3d> scratch;
    sys.torque(spins, torque, scratch);
}

PolarizationMap coarse_grain(const std::vector<SiteSample>& samples, const BinSpec& spec,
                             double t) {
    PolarizationMap map;
    map.t = t;
    const double theta_max = spec.fold_theta ? M_PI / 2 : M_PI;
    map.r_edges.resize(spec.n_r + 1);
    for (int i = 0; i <= spec.n_r; ++i)
        map.r_edges[i] = spec.r_min + (spec.r_max - spec.r_min) * i / spec.n_r;
    map.theta_edges.resize(spec.n_theta + 1);
    for (int i = 0; i <= spec.n_theta; ++i) map.theta_edges[i] = theta_max * i / spec.n_theta;
    map.mean_x.assign(spec.n_r * spec.n_theta, 0.0);
    map.count.assign(spec.n_r * spec.n_theta, 0);

    for (const auto& s : samples) {
        const double r = s.position.norm();
        if (r < spec.r_min || r >= spec.r_max || r == 0.0) continue;
        double c = std::abs(s.position.z()) / r;
        double theta = std::acos(std::clamp(spec.fold_theta ? c : s.position.z() / r, -1.0, 1.0));
        int ir = static_cast<int>((r - spec.r_min) / (spec.r_max - spec.r_min) * spec.n_r);
        int it = static_cast<int>(theta / theta_max * spec.n_theta);
        ir = std::clamp(ir, 0, spec.n_r - 1);
        it = std::clamp(it, 0, spec.n_theta - 1);
        map.mean_at(ir, it) += s.weight * s.mean_x;
        map.count_at(ir, it) += s.weight;
    }
    for (int ir = 0; ir < spec.n_r; ++ir)
        for (int it = 0; it < spec.n_theta; ++it)
            if (map.count_at(ir, it) > 0) map.mean_at(ir, it) /= map.count_at(ir, it);
    return map;
}

ClassicalRunResult classical_evolve(const ClassicalEnsemble& ensemble,
                                    const std::vector<double>& t_grid,
                                    const std::vector<double>& snapshot_times, const BinSpec& bins,
                                    const IntegratorOptions& opts, double j_scale) {
    if (ensemble.configs.empty()) throw std::invalid_argument("classical_evolve: empty ensemble");
    const std::size_t n_cfg = ensemble.configs.size();
    const std::size_t n_traj = ensemble.n_trajectories();
    const std::size_t n_t = t_grid.size();

    ClassicalRunResult out;
    out.record.times = t_grid;
    auto& ch_x = out.record.add_channel("sum_Ix");
    auto& ch_y = out.record.add_channel("sum_Iy");
    auto& ch_z = out.record.add_channel("sum_Iz");
    auto& ch_e = out.record.add_channel("energy");
    ch_x.values.assign(n_t, 0.0);
    ch_y.values.assign(n_t, 0.0);
    ch_z.values.assign(n_t, 0.0);
    ch_e.values.assign(n_t, 0.0);

    // per-config, per-snapshot, per-site accumulated x polarization
    std::vector<std::vector<std::vector<double>>> snap_acc(n_cfg);
    for (std::size_t c = 0; c < n_cfg; ++c)
        snap_acc[c].assign(snapshot_times.size(),
                           std::vector<double>(ensemble.configs[c].lattice.n_spins(), 0.0));

    std::mutex merge_mutex;
    double worst_norm_rate = 0.0, worst_energy_rate = 0.0;
    const double ensemble_weight = 1.0 / static_cast<double>(n_cfg * n_traj);

    parallel_for(n_cfg * n_traj, [&](std::size_t unit) {
        const std::size_t c = unit / n_traj;
        const std::size_t m = unit % n_traj;
        const auto& cfg = ensemble.configs[c];
        CompiledSystem sys(cfg.hamiltonian);
        SpinArray spins = cfg.trajectories[m];
        const double e0 = sys.energy(spins);
        Rk45 integrator(sys, opts);

        std::vector<double> vx(n_t, 0.0), vy(n_t, 0.0), vz(n_t, 0.0), ve(n_t, 0.0);
        double local_norm_rate = 0.0, local_energy_rate = 0.0;
        std::size_t next_snap = 0;
        double t = 0.0;
        for (std::size_t i = 0; i < n_t; ++i) {
            if (t_grid[i] > t) integrator.advance(spins, t, t_grid[i]);
            Vector3d total = Vector3d::Zero();
            double norm_dev = 0.0;
            for (const auto& s : spins) {
                total += s;
                norm_dev = std::max(norm_dev, std::abs(s.norm() - 1.0));
            }
            const double e = sys.energy(spins);
            vx[i] = total.x();
            vy[i] = total.y();
            vz[i] = total.z();
            ve[i] = e;
            if (t > 0.0) {
                const double jt = j_scale * t;
                local_norm_rate = std::max(local_norm_rate, norm_dev / jt);
                if (std::abs(e0) > 1e-12)
                    local_energy_rate = std::max(local_energy_rate, std::abs(e - e0) / std::abs(e0) / jt);
            }
            while (next_snap < snapshot_times.size() &&
                   std::abs(snapshot_times[next_snap] - t_grid[i]) < 1e-12) {
                std::lock_guard<std::mutex> lock(merge_mutex);
                auto& acc = snap_acc[c][next_snap];
                for (std::size_t k = 0; k < spins.size(); ++k) acc[k] += spins[k].x();
                ++next_snap;
            }
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t i = 0; i < n_t; ++i) {
            ch_x.values[i] += ensemble_weight * vx[i];
            ch_y.values[i] += ensemble_weight * vy[i];
            ch_z.values[i] += ensemble_weight * vz[i];
            ch_e.values[i] += ensemble_weight * ve[i];
        }
        worst_norm_rate = std::max(worst_norm_rate, local_norm_rate);
        worst_energy_rate = std::max(worst_energy_rate, local_energy_rate);
    });

    out.max_norm_drift_rate = worst_norm_rate;
    out.max_energy_drift_rate = worst_energy_rate;

    for (std::size_t s = 0; s < snapshot_times.size(); ++s) {
        std::vector<SiteSample> sites;
        for (std::size_t c = 0; c < n_cfg; ++c) {
            const auto& lattice = ensemble.configs[c].lattice;
            for (int k = 0; k < lattice.n_spins(); ++k)
                sites.push_back({lattice.positions[k], snap_acc[c][s][k] / n_traj,
                                 static_cast<long>(n_traj)});
        }
        out.snapshots.push_back(sites);
        out.maps.push_back(coarse_grain(sites, bins, snapshot_times[s]));
    }
    return out;
}

}  // namespace spintex
