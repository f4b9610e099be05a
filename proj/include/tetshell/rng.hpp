// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_RNG_HPP
#define TETSHELL_RNG_HPP

#include <cstdint>
#include <vector>

namespace tetshell {

// SplitMix64. Used everywhere a seeded stream is needed so that results are
// reproducible across platforms and standard library versions (std::shuffle
// and std::uniform_*_distribution are not portable bit-for-bit).
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit mantissa.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    // Unbiased uniform in [0, n) by rejection.
    uint64_t next_index(uint64_t n) {
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            const uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

private:
    uint64_t state_;
};

// Fisher-Yates, driven by Rng for portability.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        const size_t j = size_t(rng.next_index(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace tetshell

#endif
