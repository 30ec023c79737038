#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spintex {

/// Sampled observables on a shared time grid. Channels are identified by an
/// observable id plus a site/bond index (-1 for global quantities).
struct TimeSeriesRecord {
    std::vector<double> times;

    struct Channel {
        std::string id;
        int index = -1;
        std::vector<double> values;
    };
    std::vector<Channel> channels;

    /// Phase boundaries of a composite protocol (absolute times).
    std::vector<double> phase_boundaries;
    /// Free-form scalar summary values (t_zc, plateaus, fit exponents, ...).
    std::map<std::string, double> summary;

    Channel& add_channel(const std::string& id, int index = -1);
    const Channel* find(const std::string& id, int index = -1) const;
    Channel* find(const std::string& id, int index = -1);

    /// Values of a channel that must exist.
    const std::vector<double>& get(const std::string& id, int index = -1) const;

    std::size_t n_samples() const { return times.size(); }

    /// Append another record sampled after this one (protocol stitching).
    void append(const TimeSeriesRecord& tail);
};

/// Log-spaced grid from t_min to t_max (inclusive), n points.
std::vector<double> log_time_grid(double t_min, double t_max, int n);
/// Linear grid from 0 to t_max with n intervals (n+1 points, t=0 included).
std::vector<double> linear_time_grid(double t_max, int n);

}  // namespace spintex
