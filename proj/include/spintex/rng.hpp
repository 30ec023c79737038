#pragma once

#include <cstdint>
#include <random>

namespace spintex {

/// Deterministic RNG with cheap derived streams.
///
/// Every stochastic component takes a seed and derives independent
/// sub-streams via splitmix-style mixing, so that (config, master seed)
/// fully determines all draws regardless of execution order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Derive an independent stream for a labeled work unit.
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        return Rng(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull)));
    }

    double uniform() { return unit_(engine_); }
    double uniform(double a, double b) { return a + (b - a) * unit_(engine_); }
    double normal(double mean = 0.0, double stddev = 1.0) {
        return mean + stddev * normal_(engine_);
    }
    std::uint64_t integer(std::uint64_t n) {  // in [0, n)
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace spintex
