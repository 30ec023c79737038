#pragma once

#include <optional>
#include <vector>

#include "spintex/lindblad.hpp"

namespace spintex {

/// One stage of an experiment-style protocol (e.g. waiting period, then
/// dissipative spin-lock readout).
struct ProtocolPhase {
    enum class Generator { effective, kicked };
    Generator generator = Generator::effective;
    EffectiveHamiltonian hamiltonian;  // effective generator
    PulseSequence sequence;            // kicked generator
    std::optional<DissipationSpec> dissipation;
    double duration = 0.0;  // s
    int n_samples = 50;
    bool log_spacing = false;
    double log_t_min_fraction = 1e-3;
};

struct ProtocolSpec {
    std::vector<ProtocolPhase> phases;
    LindbladOptions lindblad;
};

/// Concatenated evolution over all phases. Times are absolute; the start of
/// each phase is recorded in record.phase_boundaries, so zero-crossing times
/// of a readout phase can be measured from its own origin.
EvolveResult run_protocol(const ProtocolSpec& spec, const QuantumState& initial,
                          const SpinLattice& lattice, const ObservableRequest& request);

}  // namespace spintex
