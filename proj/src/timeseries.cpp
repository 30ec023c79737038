#include "spintex/timeseries.hpp"

#include <cmath>
#include <stdexcept>

namespace spintex {

TimeSeriesRecord::Channel& TimeSeriesRecord::add_channel(const std::string& id, int index) {
    channels.push_back({id, index, {}});
    return channels.back();
}

const TimeSeriesRecord::Channel* TimeSeriesRecord::find(const std::string& id, int index) const {
    for (const auto& c : channels)
        if (c.id == id && c.index == index) return &c;
    return nullptr;
}

TimeSeriesRecord::Channel* TimeSeriesRecord::find(const std::string& id, int index) {
    for (auto& c : channels)
        if (c.id == id && c.index == index) return &c;
    return nullptr;
}

const std::vector<double>& TimeSeriesRecord::get(const std::string& id, int index) const {
    const Channel* c = find(id, index);
    if (!c) throw std::out_of_range("TimeSeriesRecord: no channel " + id + "[" + std::to_string(index) + "]");
    return c->values;
}

void TimeSeriesRecord::append(const TimeSeriesRecord& tail) {
    phase_boundaries.push_back(times.empty() ? 0.0 : times.back());
    for (double t : tail.times) times.push_back(t);
    for (const auto& c : tail.channels) {
        Channel* mine = find(c.id, c.index);
        if (!mine) {
            // channel absent in the head: pad with zeros up to the junction
            mine = &add_channel(c.id, c.index);
            mine->values.assign(times.size() - tail.times.size(), 0.0);
        }
        mine->values.insert(mine->values.end(), c.values.begin(), c.values.end());
    }
    for (auto& c : channels)
        if (c.values.size() != times.size())
            throw std::logic_error("TimeSeriesRecord::append: channel " + c.id + " misaligned");
}

std::vector<double> log_time_grid(double t_min, double t_max, int n) {
    if (t_min <= 0.0 || t_max <= t_min || n < 2)
        throw std::invalid_argument("log_time_grid: need 0 < t_min < t_max and n >= 2");
    std::vector<double> t(n);
    const double step = std::log(t_max / t_min) / (n - 1);
    for (int i = 0; i < n; ++i) t[i] = t_min * std::exp(step * i);
    return t;
}

std::vector<double> linear_time_grid(double t_max, int n) {
    if (t_max <= 0.0 || n < 1) throw std::invalid_argument("linear_time_grid: bad arguments");
    std::vector<double> t(n + 1);
    for (int i = 0; i <= n; ++i) t[i] = t_max * i / n;
    return t;
}

}  // namespace spintex
