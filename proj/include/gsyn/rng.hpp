#pragma once
// Deterministic RNG used wherever randomness is needed. SplitMix64 keeps
// output byte-for-byte reproducible across platforms and standard library
// versions (std::uniform_int_distribution is implementation-defined, so it
// must not appear anywhere in the library).

#include <cstdint>
#include <utility>
#include <vector>

namespace gsyn {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Derives an independent child stream, e.g. per record id or per query
// channel. Children of distinct (seed, channel) pairs do not collide in
// practice.
inline uint64_t mix_seed(uint64_t seed, uint64_t channel) {
    return splitmix64(seed ^ splitmix64(channel ^ 0x5851F42D4C957F2Dull));
}

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, n). Lemire reduction; bias is O(n / 2^64).
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next()) * n) >> 64);
    }

    // Uniform draw in [lo, hi], inclusive.
    uint64_t range(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

    double unit() {  // [0, 1)
        return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    uint64_t state_;
};

}  // namespace gsyn
