#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spintex/timeseries.hpp"

namespace spintex {

/// Rotating-frame signal: amplitude S = |sum I^x| and phase phi_R in {0, pi}
/// for x-axis dynamics, derived from the signed polarization series.
struct Signal {
    std::vector<double> t;
    std::vector<double> amplitude;  // S >= 0
    std::vector<double> phase;      // phi_R
    std::vector<double> signed_x;

    static Signal from_series(const std::vector<double>& t, const std::vector<double>& signed_x);
};

struct ZeroCrossings {
    std::optional<double> first;   // t_zc
    std::vector<double> all;       // every detected crossing
    bool degenerate = false;       // all-zero input
};

/// First sign change of a sampled series with linear interpolation between
/// samples. Crossings inside the relative noise floor are suppressed.
ZeroCrossings zero_crossing(const std::vector<double>& t, const std::vector<double>& v,
                            double noise_floor_rel = 1e-10);

enum class SpectralWindow { rectangular, hann };

struct Spectrum {
    std::vector<double> frequency;  // cycles per time unit, k/(N dt)
    std::vector<double> magnitude;
};

/// Discrete Fourier magnitude of a uniformly sampled series; the DC bin
/// equals |mean| * N for the rectangular window.
Spectrum spectrum(const std::vector<double>& t, const std::vector<double>& v,
                  SpectralWindow window = SpectralWindow::rectangular);

/// One protocol run per parameter value, with t_zc extracted per cell.
struct SweepGrid {
    std::string parameter;
    std::vector<double> values;
    std::vector<TimeSeriesRecord> records;
    std::vector<std::optional<double>> t_zc;
    std::vector<std::string> errors;  // empty string when the cell succeeded

    void validate_monotone() const;
};

struct SweepOptions {
    std::string channel = "sum_Ix";
    /// Measure t_zc from the start of the last protocol phase (the readout
    /// window) instead of the global origin.
    bool from_last_phase = true;
    double noise_floor_rel = 1e-10;
};

SweepGrid sweep(const std::string& parameter, const std::vector<double>& values,
                const std::function<TimeSeriesRecord(double)>& run_cell,
                const SweepOptions& opts = {});

/// t_zc of a record channel, optionally measured from the last phase start.
std::optional<double> extract_t_zc(const TimeSeriesRecord& rec, const SweepOptions& opts);

}  // namespace spintex
