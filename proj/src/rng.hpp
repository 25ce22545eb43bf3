#pragma once

#include <cstdint>

namespace pmx {

/// SplitMix64. Used both as a stream generator and as a mixer to derive
/// independent sub-streams from (seed, counter) pairs, so parallel trials
/// reproduce the sequential stream exactly.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) without modulo bias (bound > 0).
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_;
};

/// Derives the RNG for a (seed, stream, substream) triple.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t sub = 0) {
    SplitMix64 mixer(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)) ^ (0xc2b2ae3d27d4eb4fULL * (sub + 1)));
    return SplitMix64(mixer.next());
}

}  // namespace pmx
