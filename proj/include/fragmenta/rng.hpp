#pragma once

#include <cstdint>

namespace fragmenta {

// SplitMix64: one 64-bit word of state, passes BigCrush, trivially seedable.
// next() is Sebastiano Vigna's finalizer; the increment is the golden gamma.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform double in [0,1) with 53-bit resolution
    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // uniform in the open interval (0,1); division points must never land
    // exactly on an existing endpoint
    double uniform_open() noexcept {
        for (;;) {
            double u = uniform01();
            if (u > 0.0) return u;
        }
    }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) noexcept {
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
    }

private:
    std::uint64_t state_;
};

// independent per-replicate stream: decorrelate (master, index) with one
// extra mix round so adjacent indices share no low-bit structure
inline std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t index) noexcept {
    SplitMix64 g(master ^ (0x9e3779b97f4a7c15ull * (index + 1)));
    return g.next();
}

} // namespace fragmenta
