#pragma once

#include <cmath>
#include <cstdint>

namespace granulyzer {

// splitmix64. Used instead of <random> engines/distributions so that draws are
// bit-stable across standard library implementations.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
    return splitmix64(seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

// Uniform in (0, 1]; never returns 0 so log() is safe.
inline double u64_to_unit(std::uint64_t h) {
    return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

// Log-normal draw with the given mean and coefficient of variation, addressed
// by (seed, phase, task) so the value is independent of evaluation order.
// cv == 0 degenerates to the mean exactly.
inline double lognormal_sample(std::uint64_t seed, std::uint64_t phase, std::uint64_t task,
                               double mean, double cv) {
    if (cv <= 0.0) {
        return mean;
    }
    const double sigma2 = std::log1p(cv * cv);
    const double mu = std::log(mean) - 0.5 * sigma2;
    const std::uint64_t h = hash_combine(hash_combine(seed, phase), task);
    const double u1 = u64_to_unit(h);
    const double u2 = u64_to_unit(splitmix64(h));
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    return std::exp(mu + std::sqrt(sigma2) * z);
}

} // namespace granulyzer
