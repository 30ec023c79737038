#include "spintex/readout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spintex/threading.hpp"

namespace spintex {

Signal Signal::from_series(const std::vector<double>& t, const std::vector<double>& signed_x) {
    if (t.size() != signed_x.size()) throw std::invalid_argument("Signal: size mismatch");
    Signal s;
    s.t = t;
    s.signed_x = signed_x;
    s.amplitude.reserve(t.size());
    s.phase.reserve(t.size());
    for (double v : signed_x) {
        s.amplitude.push_back(std::abs(v));
        s.phase.push_back(v >= 0.0 ? 0.0 : M_PI);
    }
    return s;
}

ZeroCrossings zero_crossing(const std::vector<double>& t, const std::vector<double>& v,
                            double noise_floor_rel) {
    if (t.size() != v.size()) throw std::invalid_argument("zero_crossing: size mismatch");
    if (v.size() < 2) throw std::invalid_argument("zero_crossing: need at least 2 samples");

    ZeroCrossings out;
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    if (vmax == 0.0) {
        out.degenerate = true;
        return out;
    }
    const double floor = noise_floor_rel * vmax;

    // Track the last sample with magnitude above the noise floor; a crossing
    // is a sign change between consecutive significant samples.
    std::size_t i_prev = v.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) < floor) continue;
        if (i_prev < v.size() && std::signbit(v[i]) != std::signbit(v[i_prev])) {
            const double dv = v[i] - v[i_prev];
            const double tc = dv != 0.0 ? t[i_prev] - v[i_prev] * (t[i] - t[i_prev]) / dv
                                        : 0.5 * (t[i_prev] + t[i]);
            out.all.push_back(tc);
        }
        i_prev = i;
    }
    if (!out.all.empty()) out.first = out.all.front();
    return out;
}

Spectrum spectrum(const std::vector<double>& t, const std::vector<double>& v,
                  SpectralWindow window) {
    if (t.size() != v.size() || t.size() < 2) throw std::invalid_argument("spectrum: bad input");
    const std::size_t n = v.size();
    const double dt = t[1] - t[0];
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (std::abs((t[i + 1] - t[i]) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("spectrum: non-uniform time grid, resample required");

    std::vector<double> w(n, 1.0);
    if (window == SpectralWindow::hann)
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n - 1)));

    Spectrum sp;
    sp.frequency.resize(n / 2 + 1);
    sp.magnitude.resize(n / 2 + 1);
    for (std::size_t k = 0; k < sp.frequency.size(); ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double arg = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(i) / n;
            re += w[i] * v[i] * std::cos(arg);
            im += w[i] * v[i] * std::sin(arg);
        }
        sp.frequency[k] = static_cast<double>(k) / (n * dt);
        sp.magnitude[k] = std::hypot(re, im);
    }
    return sp;
}

void SweepGrid::validate_monotone() const {
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1])
            throw std::invalid_argument("SweepGrid: parameter values must be strictly increasing");
}

std::optional<double> extract_t_zc(const TimeSeriesRecord& rec, const SweepOptions& opts) {
    const auto& v = rec.get(opts.channel);
    double origin = 0.0;
    if (opts.from_last_phase && !rec.phase_boundaries.empty()) origin = rec.phase_boundaries.back();
    std::vector<double> ts, vs;
    for (std::size_t i = 0; i < rec.times.size(); ++i)
        if (rec.times[i] >= origin) {
            ts.push_back(rec.times[i] - origin);
            vs.push_back(v[i]);
        }
    if (ts.size() < 2) return std::nullopt;
    ZeroCrossings zc = zero_crossing(ts, vs, opts.noise_floor_rel);
    return zc.first;
}

SweepGrid sweep(const std::string& parameter, const std::vector<double>& values,
                const std::function<TimeSeriesRecord(double)>& run_cell, const SweepOptions& opts) {
    SweepGrid grid;
    grid.parameter = parameter;
    grid.values = values;
    grid.validate_monotone();
    grid.records.resize(values.size());
    grid.t_zc.resize(values.size());
    grid.errors.assign(values.size(), "");

    parallel_for(values.size(), [&](std::size_t i) {
        try {
            grid.records[i] = run_cell(values[i]);
            grid.t_zc[i] = extract_t_zc(grid.records[i], opts);
        } catch (const std::exception& e) {
            grid.errors[i] = e.what();
        }
    });
    return grid;
}

}  // namespace spintex
