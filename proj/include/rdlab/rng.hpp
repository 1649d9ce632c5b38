#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Deterministic sampling helpers. The engine is std::mt19937_64 (fully
// specified by the standard); the transforms below are written out so that
// streams are byte-identical across standard libraries, which the dataset
// determinism guarantee requires.
namespace rdlab::rng {

/// splitmix64-style mix of a base seed and a stream index; used to derive
/// order-independent per-batch seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1), 53 random bits.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n); rejection sampling, no modulo bias.
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = g();
    while (v >= limit) v = g();
    return v % n;
}

/// Standard normal via Box-Muller (no cached spare: two draws per value).
inline double normal01(std::mt19937_64& g) {
    double u1 = 1.0 - uniform01(g);  // (0, 1]
    double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Gaussian centered mid-range with sigma = range/4, redrawn while outside
/// [lo, hi] (up to 1000 attempts, then clamped). With lo_open, values equal
/// to lo are rejected as well.
inline double truncated_normal(std::mt19937_64& g, double lo, double hi, bool lo_open = false) {
    const double mid = 0.5 * (lo + hi);
    const double sigma = (hi - lo) / 4.0;
    double v = mid;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        v = mid + sigma * normal01(g);
        if (v >= lo && v <= hi && !(lo_open && v == lo)) return v;
    }
    v = std::min(std::max(v, lo), hi);
    if (lo_open && v == lo) v = std::nextafter(lo, hi);
    return v;
}

template <typename T>
void shuffle(std::mt19937_64& g, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(g, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace rdlab::rng
