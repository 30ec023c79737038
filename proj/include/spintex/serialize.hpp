#pragma once

#include <string>

#include "spintex/classical.hpp"
#include "spintex/effective.hpp"
#include "spintex/geometry.hpp"
#include "spintex/readout.hpp"
#include "spintex/timeseries.hpp"

// vendored single-header nlohmann/json
#include <json.hpp>

namespace spintex {

using Json = nlohmann::json;

/// All floats serialized with 17 significant digits for bit-exact round trips.
std::string format_double(double v);

Json lattice_to_json(const SpinLattice& lattice);
SpinLattice lattice_from_json(const Json& j);

/// Pair tensors exported as row-major triplets, site fields as 3-vectors.
Json hamiltonian_to_json(const EffectiveHamiltonian& h);
EffectiveHamiltonian hamiltonian_from_json(const Json& j);

/// Long-format CSV: t, observable id, site/bond index, value.
std::string record_to_csv(const TimeSeriesRecord& record);
TimeSeriesRecord record_from_csv(const std::string& csv);

Json record_summary_to_json(const TimeSeriesRecord& record);

/// CSV columns: r, theta, mean_Ix, count, t. Empty bins are omitted.
std::string map_to_csv(const PolarizationMap& map);

std::string sweep_to_csv(const SweepGrid& grid);
Json sweep_index_to_json(const SweepGrid& grid);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace spintex
