#pragma once

// Reproducible random streams.  Every walker, sampled word or pair draws
// from its own mt19937_64 seeded with derive_seed(master, stream, salt), so
// results never depend on how work is split across threads.

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace jspec {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t salt = 0) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ (salt * 0xd1b54a32d192ed03ULL));
}

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit word.
constexpr double unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return unit_interval(engine_()); }

    /// Index i with probability weights[i], given the running sums of the
    /// weights.  std::discrete_distribution is avoided because its output is
    /// implementation defined.
    std::size_t pick(std::span<const double> cumulative) {
        const double u = uniform() * cumulative.back();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
    }

    std::size_t below(std::size_t n) {
        return std::min(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
    }

private:
    std::mt19937_64 engine_;
};

inline std::vector<double> cumulative_weights(std::span<const double> weights) {
    std::vector<double> cum(weights.size());
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        s += weights[i];
        cum[i] = s;
    }
    return cum;
}

} // namespace jspec
