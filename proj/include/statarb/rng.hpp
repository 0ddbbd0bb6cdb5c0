// rng.hpp
// Seeded random streams with portable distributions. Every component derives
// its stream from the single top-level seed as
//   stream_seed = splitmix64(root_seed ^ fnv1a64(component_name)),
// so results are reproducible regardless of scheduling. Distributions are
// implemented on raw engine words because std:: distribution output is not
// pinned down by the standard.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace statarb {

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root_seed, std::string_view component) {
    return splitmix64(root_seed ^ fnv1a64(component));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, n); Lemire's multiply-shift rejection.
    std::uint64_t below(std::uint64_t n) {
        __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t threshold = -n % n;
            while (lo < threshold) {
                m = static_cast<__uint128_t>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Student t with 4 degrees of freedom (heavy-tailed, finite variance 2).
    double student_t4() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        while (u2 <= 0.0) u2 = uniform01();
        double chi2 = -2.0 * std::log(u1 * u2);  // chi-square, 4 dof
        return normal() / std::sqrt(chi2 / 4.0);
    }

    // Marks k of n positions true, uniformly without replacement.
    void sample_mask(std::size_t n, std::size_t k, std::vector<std::uint8_t>& mask) {
        mask.assign(n, 0);
        if (k >= n) {
            mask.assign(n, 1);
            return;
        }
        // Partial Fisher-Yates over an index array.
        scratch_.resize(n);
        for (std::size_t i = 0; i < n; ++i) scratch_[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(scratch_[i], scratch_[j]);
            mask[scratch_[i]] = 1;
        }
    }

private:
    std::mt19937_64 engine_;
    std::vector<std::uint32_t> scratch_;
};

}  // namespace statarb
