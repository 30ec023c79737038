#include "spintex/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "spintex/evolve.hpp"

namespace spintex {

EvolveResult run_protocol(const ProtocolSpec& spec, const QuantumState& initial,
                          const SpinLattice& lattice, const ObservableRequest& request) {
    if (spec.phases.empty()) throw std::invalid_argument("run_protocol: no phases");

    EvolveResult out;
    out.final_state = initial;
    std::vector<double> boundaries;
    double t_offset = 0.0;
    bool have_record = false;

    for (const auto& phase : spec.phases) {
        if (phase.duration < 0.0) throw std::invalid_argument("run_protocol: negative duration");
        boundaries.push_back(t_offset);
        if (phase.duration == 0.0) continue;

        EvolveResult step;
        if (phase.generator == ProtocolPhase::Generator::kicked) {
            const int n_cycles =
                std::max(1, static_cast<int>(std::floor(phase.duration / phase.sequence.period())));
            auto cycles = sample_cycle_indices(n_cycles, phase.n_samples, phase.log_spacing);
            if (phase.dissipation && phase.dissipation->any())
                throw std::invalid_argument("run_protocol: dissipative kicked phases not supported");
            step = evolve_kicked(out.final_state, lattice, phase.sequence, cycles, request);
        } else {
            std::vector<double> grid =
                phase.log_spacing
                    ? log_time_grid(phase.duration * phase.log_t_min_fraction, phase.duration,
                                    phase.n_samples)
                    : linear_time_grid(phase.duration, phase.n_samples);
            if (phase.dissipation && phase.dissipation->any())
                step = evolve_lindblad(out.final_state, phase.hamiltonian, *phase.dissipation, grid,
                                       request, spec.lindblad);
            else
                step = evolve_effective(out.final_state, phase.hamiltonian, grid, request);
        }

        for (auto& t : step.record.times) t += t_offset;
        if (!have_record) {
            out.record = std::move(step.record);
            out.record.phase_boundaries.clear();
            have_record = true;
        } else {
            out.record.append(step.record);
        }
        out.final_state = std::move(step.final_state);
        if (!out.record.times.empty()) t_offset = out.record.times.back();
    }
    out.record.phase_boundaries = std::move(boundaries);
    return out;
}

}  // namespace spintex
