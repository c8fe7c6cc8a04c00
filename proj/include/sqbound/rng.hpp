#pragma once

// Reproducible substreams for parallel Monte Carlo. Every replica r draws
// from its own generator seeded by (master_seed, stream_base + r), so results
// depend only on the seed spec and replica count, never on thread scheduling.

#include <cstdint>

namespace sqbound {

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_base = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

// xoshiro256++ with per-stream seeding through splitmix64.
class Rng {
public:
    Rng(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t st = master_seed;
        st ^= 0xD1B54A32D192ED03ULL * (stream_id + 1);
        for (auto& w : s_) w = detail::splitmix64(st);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    explicit Rng(SeedSpec spec, std::uint64_t replica = 0)
        : Rng(spec.master_seed, spec.stream_base + replica) {}

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0, 1)
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

} // namespace sqbound
