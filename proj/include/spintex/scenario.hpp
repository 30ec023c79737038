#pragma once

#include <map>
#include <string>
#include <vector>

#include "spintex/serialize.hpp"

namespace spintex {

/// Everything a scenario run produces, keyed by file name. The CLI writes
/// these into the output directory next to manifest.json.
struct ScenarioResult {
    std::map<std::string, std::string> files;
    Json summary;
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

/// Known scenario names.
const std::vector<std::string>& scenario_names();

/// Built-in default configuration for a scenario (also the documentation of
/// the accepted keys).
Json default_config(const std::string& scenario);

/// Schema and physics-bounds checks, without running anything.
ValidationReport validate_config(const Json& config);

/// Execute a validated config. Deterministic for fixed (config, seed).
ScenarioResult run_scenario(const Json& config);

}  // namespace spintex
