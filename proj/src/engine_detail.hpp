#pragma once

// Internal machinery shared by the evolution engines.

#include <vector>

#include "spintex/evolve.hpp"
#include "spintex/lindblad.hpp"
#include "spintex/spinops.hpp"
#include "spintex/timeseries.hpp"

namespace spintex::detail {

/// Fills a TimeSeriesRecord from successive state snapshots via reduced
/// density matrices (works for kets and density matrices alike).
struct Recorder {
    const ObservableRequest& req;
    const BlockHamiltonian& h;
    std::vector<Matrix4cd> bonds;
    TimeSeriesRecord record;

    Recorder(const ObservableRequest& r, const BlockHamiltonian& bh, bool chain) : req(r), h(bh) {
        if (r.bond_energy && chain) bonds = chain_bond_blocks(bh);
        if (r.total_x) record.add_channel("sum_Ix");
        if (r.site_x)
            for (int k = 0; k < h.n_spins; ++k) record.add_channel("site_Ix", k);
        if (r.site_x && r.site_yz)
            for (int k = 0; k < h.n_spins; ++k) {
                record.add_channel("site_Iy", k);
                record.add_channel("site_Iz", k);
            }
        if (r.energy) record.add_channel("energy");
        for (std::size_t k = 0; k < bonds.size(); ++k)
            record.add_channel("bond_h", static_cast<int>(k));
    }

    template <typename State>
    void sample(double t, const State& s) {
        record.times.push_back(t);
        accumulate(s, 1.0, true);
    }

    /// Weighted accumulation for trajectory bundles: call begin_sample(t),
    /// then accumulate(ket, weight) per trajectory.
    void begin_sample(double t) {
        record.times.push_back(t);
        for (auto& c : record.channels) c.values.push_back(0.0);
    }

    template <typename State>
    void accumulate(const State& s, double weight, bool fresh = false) {
        if (fresh)
            for (auto& c : record.channels) c.values.push_back(0.0);
        double sum_x = 0.0;
        std::vector<Eigen::Vector3d> spins;
        if (req.total_x || req.site_x) {
            spins.resize(h.n_spins);
            for (int k = 0; k < h.n_spins; ++k) {
                spins[k] = site_spin(s, k, h.n_spins);
                sum_x += spins[k].x();
            }
        }
        if (req.total_x) record.find("sum_Ix")->values.back() += weight * sum_x;
        if (req.site_x)
            for (int k = 0; k < h.n_spins; ++k) {
                record.find("site_Ix", k)->values.back() += weight * spins[k].x();
                if (req.site_yz) {
                    record.find("site_Iy", k)->values.back() += weight * spins[k].y();
                    record.find("site_Iz", k)->values.back() += weight * spins[k].z();
                }
            }
        if (req.energy) record.find("energy")->values.back() += weight * expectation(s, h);
        for (std::size_t k = 0; k < bonds.size(); ++k) {
            Matrix4cd rdm = two_site_rdm(s, static_cast<int>(k), static_cast<int>(k) + 1, h.n_spins);
            record.find("bond_h", static_cast<int>(k))->values.back() +=
                weight * (bonds[k] * rdm).trace().real();
        }
    }
};

EvolveResult evolve_lindblad_trajectories(const QuantumState& state,
                                          const EffectiveHamiltonian& hamiltonian,
                                          const DissipationSpec& dissipation,
                                          const std::vector<double>& t_grid,
                                          const ObservableRequest& request,
                                          const LindbladOptions& opts);

}  // namespace spintex::detail
