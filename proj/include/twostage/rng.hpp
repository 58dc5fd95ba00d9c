#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace twostage {

/// Master seed. Equal seeds give bit-identical results everywhere in the library.
struct RngSeed {
    std::uint64_t value = 0;
    constexpr bool operator==(const RngSeed&) const = default;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for an independent stream, e.g. derive(seed, {run, fold}).
constexpr RngSeed derive(RngSeed parent, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = splitmix64(parent.value);
    for (auto p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return RngSeed{h};
}

class Rng {
public:
    explicit Rng(RngSeed seed) : engine_(seed.value) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double normal(double mean = 0.0, double stddev = 1.0) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }
    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace twostage
